//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ball::{ball_sizes, word_length_with, BfsOptions, GeneratingSet};
use crate::cc::{cc_distance, pansu_convergence};
use crate::counterexamples::{bm_gap_report, bm_no_quasinorm_b, default_z0_grid};
use crate::dido::dido_max_area;
use crate::error::{Error, Result};
use crate::grading::{homogeneous_dimension, RealPoint};
use crate::group::{Element, GroupSpec};
use crate::norm::{fmt_q, parse_q, q, QPoint};
use crate::shape::{shape_json, shape_svg, LimitNorm, LimitShape};
use crate::solvable::{cone_shape, default_epsilon, slow_speed_certificate, LiouvilleAlpha};
use crate::volume::{mc_volume_h5, shape_volume_h3, shape_volume_h5_with};

#[derive(Parser, Debug)]
#[command(name = "nilgrowth", version, about = "Growth, limit shapes and word metrics of nilpotent groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Preset (H3, H5, H3xZ, Z2) or path to a group file.
    #[arg(long, global = true, default_value = "H3")]
    pub group: String,

    /// `standard` or path to a generating-set file.
    #[arg(long, global = true, default_value = "standard")]
    pub gens: String,

    #[arg(long, global = true)]
    pub nmax: Option<usize>,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Seed for Monte Carlo estimates.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Memory budget in bytes for ball enumeration.
    #[arg(long, global = true)]
    pub memory_budget: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BmPart {
    B,
    C,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ball and sphere sizes up to `--nmax`.
    Growth,
    /// Word length of one element, searched up to `--nmax`.
    Wordlen {
        /// Coordinates, horizontal then central, e.g. "0 0 1" or "0,0;1".
        element: String,
    },
    /// Limit shape as JSON or SVG.
    Shape {
        #[arg(long, default_value_t = 16)]
        resolution: usize,
    },
    /// Volume of the limit unit ball.
    Volume {
        /// Use a Monte Carlo estimate with this many samples.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Limit distance from the identity to a point "x,y;z" in exponential coordinates.
    Ccdist { point: String },
    /// Word length against limit distance on spheres.
    Converge {
        /// Comma separated radii.
        #[arg(long)]
        radii: Option<String>,
    },
    /// Largest balayage area for a horizontal endpoint "x,y".
    Dido {
        point: String,
        #[arg(long, default_value = "1")]
        length: String,
    },
    /// Radii of the two-cone limit shape.
    Cone {
        /// Points "x,y;x,y;..." at level zero (symmetric).
        #[arg(long, default_value = "")]
        omega0: String,
        /// Points at level one.
        #[arg(long)]
        omega1: String,
    },
    /// Certificates for the slowly converging rotation example.
    Slowspeed {
        /// Exponents of the rotation number. When absent they are chosen
        /// greedily for the largest radius, or set to "2,40" if that fails.
        #[arg(long)]
        exponents: Option<String>,
        #[arg(long, default_value = "100,1000,3000")]
        radii: String,
        /// Constant epsilon; the default schedule is 1/ln(n+2).
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Word metrics on Z×H3 at unbounded distance from each other.
    Bm {
        #[arg(long, value_enum, default_value = "all")]
        part: BmPart,
        #[arg(long, default_value = "1,4,9,16")]
        radii: String,
        /// Comma separated shifts; 41 points on [-1.5, 1.5] by default.
        #[arg(long)]
        z0_grid: Option<String>,
    },
}

fn load_group(spec: &str) -> Result<GroupSpec> {
    if let Some(g) = GroupSpec::preset(spec) {
        return Ok(g);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::Invalid(format!("`{spec}` is neither a preset nor a readable file: {e}")))?;
    GroupSpec::parse(&text)
}

fn load_gens(group: &GroupSpec, spec: &str) -> Result<GeneratingSet> {
    if spec == "standard" {
        return Ok(GeneratingSet::standard(group));
    }
    GeneratingSet::parse(group, &std::fs::read_to_string(spec)?)
}

fn split_nums(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c.is_whitespace() || c == ',' || c == ';').filter(|t| !t.is_empty())
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    split_nums(s)
        .map(|t| t.parse::<T>().map_err(|e| Error::Invalid(format!("bad {what} `{t}`: {e}"))))
        .collect()
}

/// "x,y;x,y;..." into points.
fn parse_points(s: &str) -> Result<Vec<[f64; 2]>> {
    s.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let v: Vec<f64> = parse_list(p, "coordinate")?;
            match v[..] {
                [x, y] => Ok([x, y]),
                _ => Err(Error::Invalid(format!("point `{p}` needs two coordinates"))),
            }
        })
        .collect()
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))? + "\n")
}

fn opts(cli: &Cli) -> BfsOptions {
    let mut o = BfsOptions { workers: cli.workers, ..Default::default() };
    if let Some(b) = cli.memory_budget {
        o.memory_budget = b;
    }
    o
}

/// Runs one command and returns its output text.
pub fn execute(cli: &Cli) -> Result<String> {
    let format = cli.format;
    let want_json = format == Some(Format::Json);
    match &cli.command {
        Command::Growth => {
            let g = load_group(&cli.group)?;
            let gs = load_gens(&g, &cli.gens)?;
            let t = ball_sizes(&gs, cli.nmax.unwrap_or(10), &opts(cli))?;
            if t.truncated {
                return Err(Error::Budget(format!("memory budget reached after radius {}", t.nmax())));
            }
            if want_json {
                json(&t)
            } else {
                Ok(t.to_csv(homogeneous_dimension(&g.grading())))
            }
        }
        Command::Wordlen { element } => {
            let g = load_group(&cli.group)?;
            let gs = load_gens(&g, &cli.gens)?;
            let v: Vec<i64> = parse_list(element, "coordinate")?;
            if v.len() != g.m() + g.c() {
                return Err(Error::Invalid(format!("expected {} coordinates", g.m() + g.c())));
            }
            let e = Element::new(v[..g.m()].to_vec(), v[g.m()..].to_vec());
            let cap = cli.nmax.unwrap_or(64);
            match word_length_with(&gs, &e, cap, &opts(cli))? {
                Some(n) => Ok(format!("{n}\n")),
                None => Err(Error::NotFound(format!("word length of {e} exceeds {cap}"))),
            }
        }
        Command::Shape { resolution } => {
            let shape = shape_for(cli)?;
            match format {
                Some(Format::Svg) => shape_svg(&shape, *resolution),
                None | Some(Format::Json) => Ok(shape_json(&shape, *resolution)? + "\n"),
                Some(f) => Err(Error::Invalid(format!("shape output supports json and svg, not {f:?}"))),
            }
        }
        Command::Volume { samples } => volume(cli, *samples),
        Command::Ccdist { point } => {
            let shape = shape_for(cli)?;
            let (m, c) = (shape.group.m(), shape.group.c());
            let v: Vec<f64> = parse_list(point, "coordinate")?;
            if v.len() != m + c {
                return Err(Error::Invalid(format!("expected {} coordinates", m + c)));
            }
            let d = cc_distance(&shape, &RealPoint::new(v[..m].to_vec(), v[m..].to_vec()));
            Ok(format!("{d}\n"))
        }
        Command::Converge { radii } => {
            let g = load_group(&cli.group)?;
            let gs = load_gens(&g, &cli.gens)?;
            let shape = LimitShape::from_generators(&gs)?;
            let radii: Vec<usize> = match (radii, cli.nmax) {
                (Some(r), _) => parse_list(r, "radius")?,
                (None, Some(n)) => {
                    let mut r = vec![(n / 3).max(1), (2 * n / 3).max(1), n.max(1)];
                    r.dedup();
                    r
                }
                (None, None) => vec![10, 20, 30],
            };
            let rep = pansu_convergence(&gs, &shape, &radii, &opts(cli))?;
            if want_json {
                json(&rep)
            } else {
                Ok(rep.to_csv())
            }
        }
        Command::Dido { point, length } => {
            let g = load_group(&cli.group)?;
            let gs = load_gens(&g, &cli.gens)?;
            let LimitNorm::Planar(p) = crate::shape::limit_norm(&gs)? else {
                return Err(Error::Unsupported("the area problem needs a planar norm".into()));
            };
            let v: Vec<_> = split_nums(point).map(parse_q).collect::<Result<_>>()?;
            let v: QPoint = match &v[..] {
                [x, y] => [x.clone(), y.clone()],
                _ => return Err(Error::Invalid("the endpoint needs two coordinates".into())),
            };
            let sol = dido_max_area(&p, &v, &parse_q(length)?)?;
            if want_json {
                #[derive(Serialize)]
                struct Out {
                    area: String,
                    multiplicity: crate::dido::Multiplicity,
                    path: Vec<[String; 2]>,
                }
                json(&Out {
                    area: fmt_q(&sol.area),
                    multiplicity: sol.multiplicity,
                    path: sol.path.iter().map(|p| [fmt_q(&p[0]), fmt_q(&p[1])]).collect(),
                })
            } else {
                let mult = match sol.multiplicity {
                    crate::dido::Multiplicity::Finite(k) => k.to_string(),
                    crate::dido::Multiplicity::Continuum => "continuum".into(),
                };
                Ok(format!("{}\nmaximizers: {mult}\n", fmt_q(&sol.area)))
            }
        }
        Command::Cone { omega0, omega1 } => {
            let c = cone_shape(&parse_points(omega0)?, &parse_points(omega1)?)?;
            if want_json {
                json(&c)
            } else {
                Ok(format!("r0 = {}\nr1 = {}\nr2 = {}\n", c.r0, c.r1, c.r2))
            }
        }
        Command::Slowspeed { exponents, radii, epsilon } => {
            let radii: Vec<u64> = parse_list(radii, "radius")?;
            let eps = |n: u64| epsilon.unwrap_or_else(|| default_epsilon(n));
            let alpha = match exponents {
                Some(e) => LiouvilleAlpha::new(parse_list(e, "exponent")?)?,
                None => {
                    let n = *radii.iter().max().ok_or_else(|| Error::Invalid("no radii".into()))?;
                    match LiouvilleAlpha::greedy(&[(n, (4.0 * eps(n)).cbrt())]) {
                        Err(Error::Infeasible(_)) => LiouvilleAlpha::new(vec![2, 40])?,
                        other => other?,
                    }
                }
            };
            let cands: Vec<(u64, f64)> = radii.iter().map(|&n| (n, eps(n))).collect();
            let rep = slow_speed_certificate(&alpha, &cands)?;
            #[derive(Serialize)]
            struct Out {
                alpha: LiouvilleAlpha,
                report: crate::solvable::CertificateReport,
            }
            json(&Out { alpha, report: rep })
        }
        Command::Bm { part, radii, z0_grid } => {
            let o = opts(cli);
            let mut out = serde_json::Map::new();
            if matches!(part, BmPart::C | BmPart::All) {
                let rep = bm_gap_report(&parse_list(radii, "radius")?, &o)?;
                out.insert("gap".into(), serde_json::to_value(rep).map_err(|e| Error::Io(e.to_string()))?);
            }
            if matches!(part, BmPart::B | BmPart::All) {
                let grid = match z0_grid {
                    Some(s) => parse_list(s, "shift")?,
                    None => default_z0_grid(),
                };
                let rep = bm_no_quasinorm_b(cli.nmax.unwrap_or(64) as u64, &grid, &o)?;
                out.insert("shift".into(), serde_json::to_value(rep).map_err(|e| Error::Io(e.to_string()))?);
            }
            json(&out)
        }
    }
}

fn shape_for(cli: &Cli) -> Result<LimitShape> {
    let g = load_group(&cli.group)?;
    LimitShape::from_generators(&load_gens(&g, &cli.gens)?)
}

fn volume(cli: &Cli, samples: Option<usize>) -> Result<String> {
    let g = load_group(&cli.group)?;
    let gs = load_gens(&g, &cli.gens)?;
    let shape = LimitShape::from_generators(&gs)?;
    match (&shape.norm, g.c()) {
        (LimitNorm::Planar(p), 0) => Ok(format!("{}\n", fmt_q(&p.area()))),
        (LimitNorm::Planar(p), 1) => {
            let b = q(g.bracket_coeff(0, 1, 0).abs());
            Ok(format!("{}\n", fmt_q(&(shape_volume_h3(p)? * b))))
        }
        (LimitNorm::CrossPolytope(4), 1) if g == GroupSpec::heisenberg5() => {
            if samples.is_some() || cli.seed.is_some() {
                let n = samples.unwrap_or(1_000_000);
                let (mean, se) = opts(cli).run(|| mc_volume_h5(n, cli.seed.unwrap_or(0)))?;
                Ok(format!("{mean} +- {se}\n"))
            } else {
                let est = opts(cli).run(|| shape_volume_h5_with(cli.tol.unwrap_or(1e-10)))??;
                Ok(format!("{}\n", est.value))
            }
        }
        _ => Err(Error::Unsupported("no volume routine for this shape".into())),
    }
}

/// Runs the command and writes its output; returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(Error::from),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("nilgrowth: {e}");
            e.exit_code()
        }
    }
}
