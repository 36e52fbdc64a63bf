//! Exact breadth-first enumeration of word-metric balls.
//!
//! Elements are stored as flat rows of machine integers (horizontal then
//! central coordinates) in an arena, with an open-addressing table of arena
//! indices for deduplication. Levels are expanded in parallel chunks that
//! only read the visited set; new elements are then merged sequentially in
//! chunk order, so the numbering of elements, and every count, is the same
//! for any number of workers.

use std::hash::Hasher;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use rustc_hash::FxHasher;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{rational_rank, Element, GroupSpec};

pub const DEFAULT_MEMORY_BUDGET: usize = 8 << 30;

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingSet {
    group: GroupSpec,
    elems: Vec<Element>,
}

impl GeneratingSet {
    /// Requires a symmetric set whose horizontal parts span `Q^m`.
    pub fn new(group: GroupSpec, elems: Vec<Element>) -> Result<Self> {
        let mut elems = elems;
        for g in &elems {
            if g.a.len() != group.m() || g.z.len() != group.c() {
                return Err(Error::Contract(format!("generator {g} does not fit the group")));
            }
        }
        elems.retain(|g| !g.is_identity());
        elems.sort();
        elems.dedup();
        for g in &elems {
            let inv = group.inverse(g)?;
            if elems.binary_search(&inv).is_err() {
                return Err(Error::Invalid(format!(
                    "generating set is not symmetric: {g} has no inverse {inv}"
                )));
            }
        }
        let rows: Vec<Vec<BigRational>> = elems
            .iter()
            .map(|g| g.a.iter().map(|x| BigRational::from_integer(BigInt::from(*x))).collect())
            .collect();
        if rational_rank(rows, group.m()) < group.m() {
            return Err(Error::Invalid(
                "generators do not span the abelianization; the set does not generate".into(),
            ));
        }
        Ok(GeneratingSet { group, elems })
    }

    /// Adds the missing inverses before validating.
    pub fn symmetric_closure(group: GroupSpec, elems: Vec<Element>) -> Result<Self> {
        let mut all = elems.clone();
        for g in &elems {
            if g.a.len() == group.m() && g.z.len() == group.c() {
                all.push(group.inverse(g)?);
            }
        }
        GeneratingSet::new(group, all)
    }

    /// `±e_i` for each horizontal basis vector.
    pub fn standard(group: &GroupSpec) -> Self {
        let (m, c) = (group.m(), group.c());
        let mut elems = Vec::new();
        for i in 0..m {
            for s in [1, -1] {
                let mut a = vec![0; m];
                a[i] = s;
                elems.push(Element::new(a, vec![0; c]));
            }
        }
        GeneratingSet::new(group.clone(), elems).expect("standard generators are valid")
    }

    /// One element per line: `m` horizontal then `c` central integers.
    /// `#` starts a comment. Missing inverses are added.
    pub fn parse(group: &GroupSpec, text: &str) -> Result<Self> {
        let (m, c) = (group.m(), group.c());
        let mut elems = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums = line
                .split(|ch: char| ch.is_whitespace() || ch == ',' || ch == ';')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: lineno + 1, msg: e.to_string() })?;
            if nums.len() != m + c {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected {} coordinates, found {}", m + c, nums.len()),
                });
            }
            elems.push(Element::new(nums[..m].to_vec(), nums[m..].to_vec()));
        }
        GeneratingSet::symmetric_closure(group.clone(), elems)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn elems(&self) -> &[Element] {
        &self.elems
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub ball: u64,
    pub sphere: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
    /// Set when the memory budget stopped the enumeration early; the rows
    /// present are still exact.
    pub truncated: bool,
}

impl GrowthTable {
    pub fn ball(&self, n: usize) -> Option<u64> {
        self.rows.get(n).map(|r| r.ball)
    }

    pub fn nmax(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    /// CSV with header `n,ball,sphere,ratio_nd`, the ratio being `ball / n^d`.
    pub fn to_csv(&self, d: usize) -> String {
        let mut s = String::from("n,ball,sphere,ratio_nd\n");
        for (r, (_, ratio)) in self.rows.iter().zip(growth_ratio(self, d)) {
            s.push_str(&format!("{},{},{},{}\n", r.n, r.ball, r.sphere, ratio));
        }
        if self.truncated {
            s.push_str("# truncated: memory budget exceeded\n");
        }
        s
    }
}

/// `|S(n)| / |B(n)|` per radius, with `S(0) = {e}`.
pub fn folner_ratios(t: &GrowthTable) -> Vec<(usize, f64)> {
    t.rows.iter().map(|r| (r.n, r.sphere as f64 / r.ball as f64)).collect()
}

/// `|B(n)| / n^d` per radius (infinite at `n = 0`).
pub fn growth_ratio(t: &GrowthTable, d: usize) -> Vec<(usize, f64)> {
    t.rows.iter().map(|r| (r.n, r.ball as f64 / (r.n as f64).powi(d as i32))).collect()
}

#[derive(Clone, Copy, Debug)]
pub struct BfsOptions {
    pub workers: Option<usize>,
    pub memory_budget: usize,
}

impl Default for BfsOptions {
    fn default() -> Self {
        BfsOptions { workers: None, memory_budget: DEFAULT_MEMORY_BUDGET }
    }
}

impl BfsOptions {
    pub fn with_workers(workers: usize) -> Self {
        BfsOptions { workers: Some(workers), ..Default::default() }
    }

    /// Runs `f` inside a pool of the configured size, or on the global pool.
    pub fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.workers {
            None => Ok(f()),
            Some(w) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(w.max(1))
                    .build()
                    .map_err(|e| Error::Invalid(format!("cannot start worker pool: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }
}

/// Right multiplication by a fixed generator as an affine map on rows.
#[derive(Clone, Debug)]
struct Step {
    da: Vec<i64>,
    dz: Vec<i64>,
    /// `lin[k][i]`: coefficient of `a_i` in `Q(a, ω.a)_k`.
    lin: Vec<Vec<i64>>,
}

/// Visited set plus arena of a breadth-first search.
pub(crate) struct Explorer {
    m: usize,
    c: usize,
    stride: usize,
    steps: Vec<Step>,
    pub(crate) coords: Vec<i64>,
    table: Vec<u32>,
    mask: usize,
    /// `levels[n]..levels[n+1]` are the element indices at distance `n`.
    pub(crate) levels: Vec<usize>,
    budget: usize,
}

const EMPTY: u32 = u32::MAX;

fn hash_row(row: &[i64]) -> u64 {
    let mut h = FxHasher::default();
    for x in row {
        h.write_i64(*x);
    }
    // FxHash leaves the low bits weak for small integers; mix them.
    let x = h.finish();
    (x ^ (x >> 29)).wrapping_mul(0xbf58_476d_1ce4_e5b9) ^ (x >> 32)
}

impl Explorer {
    pub(crate) fn new(gs: &GeneratingSet, root: &Element, budget: usize) -> Result<Self> {
        let g = gs.group();
        let (m, c) = (g.m(), g.c());
        let steps = gs
            .elems()
            .iter()
            .map(|w| {
                let dz = w.z_i64().ok_or(Error::Overflow("generator central coordinate"))?;
                let lin = (0..c)
                    .map(|k| {
                        (0..m)
                            .map(|i| {
                                let mut s: i64 = 0;
                                for j in 0..m {
                                    s = s
                                        .checked_add(
                                            g.q(i, j, k)
                                                .checked_mul(w.a[j])
                                                .ok_or(Error::Overflow("cocycle"))?,
                                        )
                                        .ok_or(Error::Overflow("cocycle"))?;
                                }
                                Ok(s)
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Step { da: w.a.clone(), dz, lin })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut ex = Explorer {
            m,
            c,
            stride: m + c,
            steps,
            coords: Vec::new(),
            table: vec![EMPTY; 1024],
            mask: 1023,
            levels: vec![0],
            budget,
        };
        let mut row = root.a.clone();
        row.extend(root.z_i64().ok_or(Error::Overflow("central coordinate"))?);
        ex.insert(&row);
        ex.levels.push(1);
        Ok(ex)
    }

    pub(crate) fn len(&self) -> usize {
        self.coords.len() / self.stride
    }

    pub(crate) fn row(&self, i: usize) -> &[i64] {
        &self.coords[i * self.stride..(i + 1) * self.stride]
    }

    pub(crate) fn element(&self, i: usize) -> Element {
        let r = self.row(i);
        Element::new(r[..self.m].to_vec(), r[self.m..].to_vec())
    }

    pub(crate) fn radius(&self) -> usize {
        self.levels.len() - 2
    }

    fn bytes(&self) -> usize {
        self.coords.capacity() * 8 + self.table.len() * 4
    }

    pub(crate) fn find(&self, row: &[i64]) -> Option<usize> {
        let mut h = hash_row(row) as usize & self.mask;
        loop {
            let slot = self.table[h];
            if slot == EMPTY {
                return None;
            }
            if self.row(slot as usize) == row {
                return Some(slot as usize);
            }
            h = (h + 1) & self.mask;
        }
    }

    /// Returns whether the row was new.
    fn insert(&mut self, row: &[i64]) -> bool {
        let mut h = hash_row(row) as usize & self.mask;
        loop {
            let slot = self.table[h];
            if slot == EMPTY {
                break;
            }
            if self.row(slot as usize) == row {
                return false;
            }
            h = (h + 1) & self.mask;
        }
        let idx = self.len() as u32;
        self.table[h] = idx;
        self.coords.extend_from_slice(row);
        if 2 * self.len() > self.table.len() {
            self.grow_table();
        }
        true
    }

    fn grow_table(&mut self) {
        let cap = self.table.len() * 2;
        self.table = vec![EMPTY; cap];
        self.mask = cap - 1;
        for i in 0..self.len() {
            let mut h = hash_row(self.row(i)) as usize & self.mask;
            while self.table[h] != EMPTY {
                h = (h + 1) & self.mask;
            }
            self.table[h] = i as u32;
        }
    }

    fn apply(&self, row: &[i64], s: &Step, out: &mut Vec<i64>) -> Result<()> {
        let (m, c) = (self.m, self.c);
        for i in 0..m {
            out.push(row[i].checked_add(s.da[i]).ok_or(Error::Overflow("horizontal coordinate"))?);
        }
        for k in 0..c {
            let mut z = row[m + k].checked_add(s.dz[k]).ok_or(Error::Overflow("central coordinate"))?;
            for i in 0..m {
                let l = s.lin[k][i];
                if l != 0 {
                    z = row[i]
                        .checked_mul(l)
                        .and_then(|t| z.checked_add(t))
                        .ok_or(Error::Overflow("central coordinate"))?;
                }
            }
            out.push(z);
        }
        Ok(())
    }

    /// Adds the next sphere. Returns `Ok(false)` if the memory budget would
    /// be exceeded, leaving the explorer unchanged.
    pub(crate) fn grow_level(&mut self) -> Result<bool> {
        let start = self.levels[self.levels.len() - 2];
        let end = self.levels[self.levels.len() - 1];
        let frontier = end - start;
        let worst_new = frontier * self.steps.len();
        let projected = self.bytes()
            + worst_new * self.stride * 8 * 2
            + (self.len() + worst_new) * 4 * 4;
        if projected > self.budget {
            return Ok(false);
        }
        const CHUNK: usize = 4096;
        let ranges: Vec<(usize, usize)> =
            (start..end).step_by(CHUNK).map(|s| (s, (s + CHUNK).min(end))).collect();
        let this = &*self;
        let found: Vec<Result<Vec<i64>>> = ranges
            .par_iter()
            .map(|&(s, e)| {
                let mut out = Vec::new();
                let mut buf = Vec::with_capacity(this.stride);
                for i in s..e {
                    let row = this.row(i);
                    for st in &this.steps {
                        buf.clear();
                        this.apply(row, st, &mut buf)?;
                        if this.find(&buf).is_none() {
                            out.extend_from_slice(&buf);
                        }
                    }
                }
                Ok(out)
            })
            .collect();
        for chunk in found {
            let chunk = chunk?;
            for row in chunk.chunks_exact(self.stride) {
                self.insert(row);
            }
        }
        let len = self.len();
        self.levels.push(len);
        Ok(true)
    }
}

/// All elements of `B(n)` grouped by distance from the identity.
pub struct Ball {
    ex: Explorer,
    pub truncated: bool,
}

impl Ball {
    pub fn enumerate(gs: &GeneratingSet, nmax: usize, opts: &BfsOptions) -> Result<Ball> {
        opts.run(|| {
            let mut ex = Explorer::new(gs, &gs.group().identity(), opts.memory_budget)?;
            let mut truncated = false;
            while ex.radius() < nmax {
                if !ex.grow_level()? {
                    truncated = true;
                    break;
                }
            }
            Ok(Ball { ex, truncated })
        })?
    }

    pub fn radius(&self) -> usize {
        self.ex.radius()
    }

    pub fn len(&self) -> usize {
        self.ex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ex.len() == 0
    }

    pub fn stride(&self) -> usize {
        self.ex.stride
    }

    /// Rows of the sphere `S(n)`: horizontal then central coordinates.
    pub fn sphere(&self, n: usize) -> impl Iterator<Item = &[i64]> + '_ {
        let (s, e) = (self.ex.levels[n], self.ex.levels[n + 1]);
        (s..e).map(move |i| self.ex.row(i))
    }

    pub fn sphere_len(&self, n: usize) -> usize {
        self.ex.levels[n + 1] - self.ex.levels[n]
    }

    /// Rows of `B(n)`.
    pub fn rows(&self, n: usize) -> impl Iterator<Item = &[i64]> + '_ {
        (0..self.ex.levels[n + 1]).map(move |i| self.ex.row(i))
    }

    pub fn element(&self, i: usize) -> Element {
        self.ex.element(i)
    }

    pub fn table(&self) -> GrowthTable {
        let rows = (0..=self.radius())
            .map(|n| GrowthRow {
                n,
                ball: self.ex.levels[n + 1] as u64,
                sphere: (self.ex.levels[n + 1] - self.ex.levels[n]) as u64,
            })
            .collect();
        GrowthTable { rows, truncated: self.truncated }
    }
}

pub fn ball_sizes(gs: &GeneratingSet, nmax: usize, opts: &BfsOptions) -> Result<GrowthTable> {
    Ok(Ball::enumerate(gs, nmax, opts)?.table())
}

/// `max(‖a‖₁, sqrt(‖z‖₁))`, the size measure used to choose the search mode.
fn rough_size(g: &Element) -> f64 {
    let h: f64 = g.a.iter().map(|x| x.unsigned_abs() as f64).sum();
    let z: f64 = g.z.iter().map(|x| crate::group::big_to_f64(x).abs()).sum();
    h.max(z.sqrt())
}

/// Smallest `n` with `g ∈ Ωⁿ`, or `None` if it exceeds `cap`.
pub fn word_length(gs: &GeneratingSet, g: &Element, cap: usize) -> Result<Option<usize>> {
    word_length_with(gs, g, cap, &BfsOptions::default())
}

pub fn word_length_with(
    gs: &GeneratingSet,
    g: &Element,
    cap: usize,
    opts: &BfsOptions,
) -> Result<Option<usize>> {
    let grp = gs.group();
    if g.a.len() != grp.m() || g.z.len() != grp.c() {
        return Err(Error::Contract(format!("element {g} does not fit the group")));
    }
    if g.is_identity() {
        return Ok(Some(0));
    }
    let mut target = g.a.clone();
    target.extend(g.z_i64().ok_or(Error::Overflow("central coordinate"))?);
    opts.run(|| {
        let budget = opts.memory_budget;
        if rough_size(g) <= 8.0 {
            let mut ex = Explorer::new(gs, &grp.identity(), budget)?;
            while ex.radius() < cap {
                if !ex.grow_level()? {
                    return Err(Error::Budget("word length search exceeded memory budget".into()));
                }
                let n = ex.radius();
                let (s, e) = (ex.levels[n], ex.levels[n + 1]);
                if (s..e).any(|i| ex.row(i) == target.as_slice()) {
                    return Ok(Some(n));
                }
            }
            return Ok(None);
        }
        // Forward balls around e and backward balls {g·y}; a point at
        // distance i from e and j from g first appears when i + j is the
        // word length.
        let mut fwd = Explorer::new(gs, &grp.identity(), budget / 2)?;
        let mut bwd = Explorer::new(gs, g, budget / 2)?;
        let mut forward_turn = true;
        loop {
            let total = fwd.radius() + bwd.radius();
            if total >= cap {
                return Ok(None);
            }
            let (grow, other) = if forward_turn { (&mut fwd, &bwd) } else { (&mut bwd, &fwd) };
            if !grow.grow_level()? {
                return Err(Error::Budget("word length search exceeded memory budget".into()));
            }
            let n = grow.radius();
            let (s, e) = (grow.levels[n], grow.levels[n + 1]);
            let hit = (s..e).any(|i| other.find(grow.row(i)).is_some());
            if hit {
                return Ok(Some(total + 1));
            }
            forward_turn = !forward_turn;
        }
    })?
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn h3() -> GeneratingSet {
        GeneratingSet::standard(&GroupSpec::heisenberg3())
    }

    #[test]
    fn h3_small_balls() {
        let t = ball_sizes(&h3(), 2, &BfsOptions::default()).unwrap();
        let v: Vec<(usize, u64, u64)> = t.rows.iter().map(|r| (r.n, r.ball, r.sphere)).collect();
        assert_eq!(v, vec![(0, 1, 1), (1, 5, 4), (2, 17, 12)]);
    }

    #[test]
    fn matches_naive_word_enumeration() {
        let gs = h3();
        let g = gs.group().clone();
        let mut layer: HashSet<Element> = [g.identity()].into_iter().collect();
        let mut all = layer.clone();
        let t = ball_sizes(&gs, 6, &BfsOptions::default()).unwrap();
        for n in 1..=6 {
            let mut next = HashSet::new();
            for x in &layer {
                for w in gs.elems() {
                    next.insert(g.multiply(x, w).unwrap());
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
            assert_eq!(all.len() as u64, t.ball(n).unwrap(), "radius {n}");
        }
    }

    #[test]
    fn word_lengths() {
        let gs = h3();
        let e = |a: &[i64], z: &[i64]| Element::new(a.to_vec(), z.to_vec());
        assert_eq!(word_length(&gs, &e(&[0, 0], &[0]), 10).unwrap(), Some(0));
        assert_eq!(word_length(&gs, &e(&[1, 0], &[0]), 10).unwrap(), Some(1));
        assert_eq!(word_length(&gs, &e(&[0, 0], &[1]), 10).unwrap(), Some(4));
        assert_eq!(word_length(&gs, &e(&[0, 0], &[1]), 3).unwrap(), None);
    }

    #[test]
    fn bidirectional_agrees_with_forward_search() {
        let gs = h3();
        let ball = Ball::enumerate(&gs, 14, &BfsOptions::default()).unwrap();
        for n in [10, 12, 14] {
            for (k, row) in ball.sphere(n).enumerate() {
                if k % 97 != 0 {
                    continue;
                }
                let g = Element::new(row[..2].to_vec(), row[2..].to_vec());
                if rough_size(&g) > 8.0 {
                    assert_eq!(word_length(&gs, &g, 20).unwrap(), Some(n), "{g}");
                }
            }
        }
    }

    #[test]
    fn abelian_z() {
        let gs = GeneratingSet::standard(&GroupSpec::abelian(1));
        let t = ball_sizes(&gs, 30, &BfsOptions::default()).unwrap();
        for (n, r) in folner_ratios(&t).into_iter().skip(1) {
            assert!((r - 2.0 / (2.0 * n as f64 + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn budget_truncates() {
        let opts = BfsOptions { workers: Some(1), memory_budget: 200_000 };
        let t = ball_sizes(&h3(), 40, &opts).unwrap();
        assert!(t.truncated);
        assert!(t.nmax() < 40);
        let full = ball_sizes(&h3(), t.nmax(), &BfsOptions::default()).unwrap();
        assert_eq!(full.rows, t.rows);
    }

    #[test]
    fn rejects_bad_sets() {
        let g = GroupSpec::heisenberg3();
        let one = vec![Element::new(vec![1, 0], vec![0])];
        assert!(GeneratingSet::new(g.clone(), one.clone()).is_err());
        assert!(GeneratingSet::symmetric_closure(g.clone(), one).is_err());
    }

    #[test]
    fn csv_layout() {
        let t = ball_sizes(&h3(), 2, &BfsOptions::default()).unwrap();
        assert_eq!(t.to_csv(4), "n,ball,sphere,ratio_nd\n0,1,1,inf\n1,5,4,5\n2,17,12,1.0625\n");
    }
}
