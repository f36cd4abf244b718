//! Exhaustive enumeration of permutation specs, their inverses, and
//! involutions over a field, for a set of indices.
//!
//! The stream is totally ordered: ascending index `ell`, then lexicographic
//! over the branch-exponent vector `r` (components restricted to
//! `[1, s]` coprime to `s`), then lexicographic over the coefficient-log
//! vector `k`. The `k` space is walked by depth-first search that abandons
//! a prefix as soon as a coset residue repeats, so only bijective `φ`
//! survive. Work shards over `r`-vectors; a windowed ordered merge keeps the
//! output byte-identical no matter how many worker threads run.
//!
//! Counting convention: a mapping of index `d` is also expressible at any
//! index `d | ell`, so enumerating `{1, 2}` would list every index-1 map
//! twice. By default an index that divides another requested index is
//! dropped ("index at most ell" counting); `per_index` enumerates every
//! requested index independently.

use crate::cyclo::CycloSpec;
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::permcheck::{count_fixed_points, gcd, invert};
use crate::polyform::{expand, format_poly};
use rayon::prelude::*;
use std::collections::VecDeque;

/// One search result: a permutation spec with its closed-form inverse,
/// involution flag, nonzero fixed-point count, and (on request) the
/// rendered polynomials.
#[derive(Clone, Debug)]
pub struct PermRecord {
    pub spec: CycloSpec,
    pub inverse: CycloSpec,
    pub involution: bool,
    pub nonzero_fixed_points: i64,
    pub poly_text: Option<String>,
    pub inverse_poly_text: Option<String>,
}

/// What to enumerate and which filters to apply.
#[derive(Clone, Debug, Default)]
pub struct SearchQuery {
    /// Indices to enumerate; each must divide `q-1`.
    pub ell_list: Vec<i64>,
    pub involutions_only: bool,
    /// Keep only records with at most this many nonzero fixed points.
    pub max_fixed_points: Option<i64>,
    /// Render `poly_text` / `inverse_poly_text` lazily per emitted record.
    pub emit_polys: bool,
    /// Constrain the whole `r`-vector: a single value broadcasts to every
    /// branch, otherwise the length must equal `ell`.
    pub fix_r: Option<Vec<i64>>,
    /// Enumerate every listed index independently instead of dropping
    /// indices subsumed by a larger listed index.
    pub per_index: bool,
}

impl SearchQuery {
    pub fn all_pps(ell_list: Vec<i64>) -> SearchQuery {
        SearchQuery { ell_list, ..SearchQuery::default() }
    }
}

/// Divisors of `n`, ascending.
pub fn divisors(n: i64) -> Vec<i64> {
    let mut out: Vec<i64> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

/// Validates the index list against `q-1` and applies the counting
/// convention (see module docs).
pub fn effective_indices(ctx: &FieldCtx, query: &SearchQuery) -> Result<Vec<i64>> {
    let order = ctx.order();
    let mut ells = query.ell_list.clone();
    ells.sort_unstable();
    ells.dedup();
    for &ell in &ells {
        if ell < 1 || order % ell != 0 {
            return Err(Error::EllDoesNotDivide { ell, group_order: order });
        }
    }
    if !query.per_index {
        let all = ells.clone();
        ells.retain(|&d| !all.iter().any(|&e| e != d && e % d == 0));
    }
    Ok(ells)
}

/// Enumerates matching records in the total order described in the module
/// docs. The stream is lazy with bounded memory; with more than one rayon
/// worker thread it shards over `r`-vectors and merges shard outputs in
/// order, yielding output identical to the single-threaded stream.
pub fn enumerate<'a>(
    ctx: &'a FieldCtx,
    query: &SearchQuery,
) -> Result<impl Iterator<Item = PermRecord> + 'a> {
    let ells = effective_indices(ctx, query)?;
    if let (Some(fix), true) = (&query.fix_r, ells.len() == 1) {
        if fix.len() != 1 && fix.len() != ells[0] as usize {
            return Err(Error::LengthMismatch);
        }
    }
    Ok(RecordStream::new(ctx, query.clone(), ells))
}

/// Counts `(permutation specs, involutions)` for the given indices without
/// rendering any polynomials. Same counting convention as [`enumerate`].
pub fn count_summary(ctx: &FieldCtx, ell_list: &[i64]) -> Result<(u64, u64)> {
    count_summary_with(ctx, &SearchQuery::all_pps(ell_list.to_vec()))
}

/// [`count_summary`] with the full query (honors `fix_r` and `per_index`;
/// ignores the record-level filters, which do not change the two totals).
pub fn count_summary_with(ctx: &FieldCtx, query: &SearchQuery) -> Result<(u64, u64)> {
    let ells = effective_indices(ctx, query)?;
    let mut pps = 0u64;
    let mut involutions = 0u64;
    for ell in ells {
        let s = ctx.order() / ell;
        let mut shards = RVecOdometer::new(s, ell as usize, query.fix_r.as_deref())?;
        loop {
            let batch: Vec<Vec<i64>> = shards.by_ref().take(4096).collect();
            if batch.is_empty() {
                break;
            }
            let (p, i) = batch
                .par_iter()
                .map(|r| shard_counts(ctx, ell, s, r))
                .reduce(|| (0, 0), |(a, b), (c, d)| (a + c, b + d));
            pps += p;
            involutions += i;
        }
    }
    Ok((pps, involutions))
}

/// Involutions of one index with at most `max_fp` nonzero fixed points,
/// in enumeration order. A negative bound yields an empty stream.
pub fn few_fixed_point_involutions(
    ctx: &FieldCtx,
    ell: i64,
    max_fp: i64,
) -> Result<impl Iterator<Item = PermRecord> + '_> {
    let query = SearchQuery {
        ell_list: vec![ell],
        involutions_only: true,
        max_fixed_points: Some(max_fp),
        ..SearchQuery::default()
    };
    enumerate(ctx, &query)
}

// ---------------------------------------------------------------------------
// stream internals
// ---------------------------------------------------------------------------

struct RecordStream<'a> {
    ctx: &'a FieldCtx,
    query: SearchQuery,
    ells: Vec<i64>,
    ell_idx: usize,
    shards: Option<RVecOdometer>,
    /// Lazy k-walk of the current shard (single-shard mode).
    active: Option<KShardIter>,
    /// Records from parallel shard windows, drained in order.
    buffer: VecDeque<PermRecord>,
    parallel: bool,
}

/// Records a shard can hold: `ell! · s^ell`, saturating. Gates parallel
/// shard materialization; anything larger streams sequentially.
fn shard_size_estimate(ell: i64, s: i64) -> u64 {
    let mut est: u64 = 1;
    for i in 1..=ell as u64 {
        est = est.saturating_mul(i);
    }
    for _ in 0..ell {
        est = est.saturating_mul(s as u64);
    }
    est
}

const PARALLEL_SHARD_CAP: u64 = 1 << 20;

impl<'a> RecordStream<'a> {
    fn new(ctx: &'a FieldCtx, query: SearchQuery, ells: Vec<i64>) -> RecordStream<'a> {
        // One fixed r-vector means one shard: nothing to parallelize. Huge
        // shards stay sequential so the stream keeps bounded memory and
        // stays usable under a row limit.
        let order = ctx.order();
        let small_shards = ells
            .iter()
            .all(|&ell| shard_size_estimate(ell, order / ell) <= PARALLEL_SHARD_CAP);
        let parallel =
            rayon::current_num_threads() > 1 && query.fix_r.is_none() && small_shards;
        RecordStream {
            ctx,
            query,
            ells,
            ell_idx: 0,
            shards: None,
            active: None,
            buffer: VecDeque::new(),
            parallel,
        }
    }

    fn next_ell(&mut self) -> bool {
        if self.ell_idx >= self.ells.len() {
            return false;
        }
        let ell = self.ells[self.ell_idx];
        self.ell_idx += 1;
        let s = self.ctx.order() / ell;
        match RVecOdometer::new(s, ell as usize, self.query.fix_r.as_deref()) {
            Ok(odo) => {
                self.shards = Some(odo);
                true
            }
            // fix_r length mismatch for this index: nothing to emit here
            Err(_) => {
                self.shards = None;
                true
            }
        }
    }

    fn refill(&mut self) -> bool {
        loop {
            if let Some(active) = &mut self.active {
                if let Some(k) = active.next() {
                    if let Some(rec) = build_record(
                        self.ctx,
                        active.ell as i64,
                        active.s,
                        &active.r,
                        k,
                        &self.query,
                    ) {
                        self.buffer.push_back(rec);
                        return true;
                    }
                    continue;
                }
                self.active = None;
            }
            if let Some(shards) = &mut self.shards {
                if self.parallel {
                    let window = rayon::current_num_threads() * 4;
                    let batch: Vec<Vec<i64>> = shards.by_ref().take(window).collect();
                    if !batch.is_empty() {
                        let ell = shards.ell as i64;
                        let s = shards.s;
                        let ctx = self.ctx;
                        let query = &self.query;
                        let produced: Vec<Vec<PermRecord>> = batch
                            .par_iter()
                            .map(|r| {
                                KShardIter::new(ell, s, r.clone())
                                    .filter_map(|k| build_record(ctx, ell, s, r, k, query))
                                    .collect()
                            })
                            .collect();
                        self.buffer.extend(produced.into_iter().flatten());
                        if !self.buffer.is_empty() {
                            return true;
                        }
                        continue;
                    }
                } else if let Some(r) = shards.next() {
                    self.active = Some(KShardIter::new(shards.ell as i64, shards.s, r));
                    continue;
                }
                self.shards = None;
            }
            if !self.next_ell() {
                return false;
            }
        }
    }
}

impl Iterator for RecordStream<'_> {
    type Item = PermRecord;

    fn next(&mut self) -> Option<PermRecord> {
        if self.buffer.is_empty() && !self.refill() {
            return None;
        }
        self.buffer.pop_front()
    }
}

fn build_record(
    ctx: &FieldCtx,
    ell: i64,
    s: i64,
    r: &[i64],
    k: Vec<i64>,
    query: &SearchQuery,
) -> Option<PermRecord> {
    let spec = CycloSpec::from_canonical(ell, s, r.to_vec(), k);
    let inverse = invert(ctx, &spec).expect("the k-walk only emits permutations");
    let involution = inverse == spec;
    if query.involutions_only && !involution {
        return None;
    }
    let nonzero_fixed_points = count_fixed_points(ctx, &spec);
    if let Some(max) = query.max_fixed_points {
        if nonzero_fixed_points > max {
            return None;
        }
    }
    let (poly_text, inverse_poly_text) = if query.emit_polys {
        (
            Some(format_poly(ctx, &expand(ctx, &spec))),
            Some(format_poly(ctx, &expand(ctx, &inverse))),
        )
    } else {
        (None, None)
    };
    Some(PermRecord {
        spec,
        inverse,
        involution,
        nonzero_fixed_points,
        poly_text,
        inverse_poly_text,
    })
}

fn shard_counts(ctx: &FieldCtx, ell: i64, s: i64, r: &[i64]) -> (u64, u64) {
    let mut pps = 0;
    let mut involutions = 0;
    for k in KShardIter::new(ell, s, r.to_vec()) {
        let spec = CycloSpec::from_canonical(ell, s, r.to_vec(), k);
        pps += 1;
        if invert(ctx, &spec).expect("permutation") == spec {
            involutions += 1;
        }
    }
    (pps, involutions)
}

/// Lexicographic iterator over `r`-vectors with every component in `[1, s]`
/// and coprime to `s` (or the single fixed vector, gcd-filtered).
struct RVecOdometer {
    ell: usize,
    s: i64,
    units: Vec<i64>,
    idx: Vec<usize>,
    fixed: Option<Vec<i64>>,
    done: bool,
}

impl RVecOdometer {
    fn new(s: i64, ell: usize, fix_r: Option<&[i64]>) -> Result<RVecOdometer> {
        if let Some(fix) = fix_r {
            let fix = if fix.len() == 1 {
                vec![fix[0]; ell]
            } else if fix.len() == ell {
                fix.to_vec()
            } else {
                return Err(Error::LengthMismatch);
            };
            let fixed: Vec<i64> = fix
                .iter()
                .map(|&v| {
                    let m = v.rem_euclid(s);
                    if m == 0 {
                        s
                    } else {
                        m
                    }
                })
                .collect();
            let done = fixed.iter().any(|&v| gcd(v, s) != 1);
            return Ok(RVecOdometer {
                ell,
                s,
                units: Vec::new(),
                idx: Vec::new(),
                fixed: Some(fixed),
                done,
            });
        }
        let units: Vec<i64> = (1..=s).filter(|&x| gcd(x, s) == 1).collect();
        Ok(RVecOdometer {
            ell,
            s,
            units,
            idx: vec![0; ell],
            fixed: None,
            done: false,
        })
    }
}

impl Iterator for RVecOdometer {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        if let Some(fixed) = &self.fixed {
            self.done = true;
            return Some(fixed.clone());
        }
        let current: Vec<i64> = self.idx.iter().map(|&i| self.units[i]).collect();
        // advance the odometer from the rightmost position
        let mut pos = self.ell;
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.idx[pos] += 1;
            if self.idx[pos] < self.units.len() {
                break;
            }
            self.idx[pos] = 0;
        }
        Some(current)
    }
}

/// Depth-first walk of the `k`-space for one `r`-vector, yielding complete
/// vectors in lexicographic order. A prefix dies the moment its coset
/// residue `(k_i + i·r_i) mod ell` collides with an earlier branch, which
/// prunes the `(q-1)^ell` space to the bijective-φ survivors.
struct KShardIter {
    ell: usize,
    s: i64,
    order: i64,
    r: Vec<i64>,
    committed: Vec<i64>,
    used: Vec<bool>,
    cand: Vec<i64>,
    level: isize,
}

impl KShardIter {
    fn new(ell: i64, s: i64, r: Vec<i64>) -> KShardIter {
        let ell = ell as usize;
        KShardIter {
            ell,
            s,
            order: ell as i64 * s,
            r,
            committed: Vec::with_capacity(ell),
            used: vec![false; ell],
            cand: vec![0; ell],
            level: 0,
        }
    }

    fn residue(&self, level: usize, value: i64) -> usize {
        ((value + level as i64 * self.r[level]) % self.ell as i64) as usize
    }

    fn pop_level(&mut self) {
        let value = self.committed.pop().expect("nonempty prefix");
        let level = self.committed.len();
        let res = self.residue(level, value);
        self.used[res] = false;
        self.cand[level] = value + 1;
        self.level = level as isize;
    }
}

impl Iterator for KShardIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        while self.level >= 0 {
            let level = self.level as usize;
            if level == self.ell {
                let out = self.committed.clone();
                self.pop_level();
                return Some(out);
            }
            let mut value = self.cand[level];
            let mut committed = false;
            while value < self.order {
                let res = self.residue(level, value);
                if !self.used[res] {
                    self.committed.push(value);
                    self.used[res] = true;
                    self.level += 1;
                    if (self.level as usize) < self.ell {
                        self.cand[self.level as usize] = 0;
                    }
                    committed = true;
                    break;
                }
                value += 1;
            }
            if !committed {
                if level == 0 {
                    self.level = -1;
                } else {
                    self.pop_level();
                }
            }
        }
        None
    }
}
