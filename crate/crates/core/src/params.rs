//! Parameter-plane combinatorics: conjugate angles, roots, wakes and limbs.
//!
//! Periodic parameter rays land in pairs at roots of hyperbolic components.
//! The pairing is built period by period: within one period, repeatedly join
//! the two circularly closest unmatched angles whose chord crosses no chord
//! constructed so far. Every angle of exact period `n` is a characteristic
//! angle of exactly one root, so the pairing doubles as the conjugate-angle
//! function.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::collections::BinaryHeap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::angle::{Angle, CircularArc};
use crate::{Error, Result};

/// Largest period for which full pairing tables are built (memory is
/// proportional to `2^period`). Beyond this the per-angle kneading solver
/// takes over.
pub const TABLE_LIMIT: u32 = 24;

const SENTINEL: u32 = u32::MAX;

/// A root of a hyperbolic component: the pair of co-landing periodic
/// parameter angles, with its ray period and satellite flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootPair {
    lo: Angle,
    hi: Angle,
    ray_period: u32,
    satellite: bool,
}

/// Rotation number `k/r` of a limb of the main cardioid, reduced, `0 < k < r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Limb {
    pub k: u32,
    pub r: u32,
}

impl Limb {
    pub fn new(k: u32, r: u32) -> Result<Limb> {
        if k == 0 || k >= r || gcd_u32(k, r) != 1 {
            return Err(Error::Domain(format!("invalid rotation number {k}/{r}")));
        }
        Ok(Limb { k, r })
    }
}

fn gcd_u32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl RootPair {
    pub fn lo(&self) -> Angle {
        self.lo
    }

    pub fn hi(&self) -> Angle {
        self.hi
    }

    pub fn ray_period(&self) -> u32 {
        self.ray_period
    }

    pub fn is_satellite(&self) -> bool {
        self.satellite
    }

    /// The root whose characteristic pair contains `a`.
    pub fn of_angle(a: &Angle) -> Result<RootPair> {
        let b = conjugate_angle(a)?;
        Ok(RootPair::from_pair(*a, b))
    }

    pub(crate) fn from_numerators(lo: u64, hi: u64, period: u32, satellite: bool) -> RootPair {
        let mm = (1u128 << period) - 1;
        RootPair {
            lo: Angle::new(u128::from(lo), mm),
            hi: Angle::new(u128::from(hi), mm),
            ray_period: period,
            satellite,
        }
    }

    fn from_pair(a: Angle, b: Angle) -> RootPair {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let period = a.preperiod_period().period;
        RootPair {
            lo,
            hi,
            ray_period: period,
            satellite: same_orbit(&lo, &hi),
        }
    }

    /// True iff `a` lies strictly inside the wake arc `(lo, hi)`.
    pub fn wake_contains(&self, a: &Angle) -> bool {
        a.in_open_arc(&self.lo, &self.hi)
    }

    /// The mirror root under complex conjugation of parameters.
    pub fn conjugate(&self) -> RootPair {
        RootPair {
            lo: self.hi.minus(),
            hi: self.lo.minus(),
            ray_period: self.ray_period,
            satellite: self.satellite,
        }
    }

    /// Wakes of distinct roots are nested or disjoint; this tests nesting in
    /// either direction (a root is never "comparable" with itself).
    pub fn nested_with(&self, other: &RootPair) -> bool {
        other.wake_contains(&self.lo) && other.wake_contains(&self.hi)
            || self.wake_contains(&other.lo) && self.wake_contains(&other.hi)
    }
}

fn same_orbit(a: &Angle, b: &Angle) -> bool {
    let mut x = a.double();
    while x != *a {
        if x == *b {
            return true;
        }
        x = x.double();
    }
    *a == *b
}

/// Immutable pairing of all exact-period angles `j/(2^n - 1)`.
pub struct PairingTable {
    period: u32,
    modulus: u64,
    partner: Vec<u32>,
}

impl PairingTable {
    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Exact period `n` test for the numerator `j` over `2^n - 1`.
    pub fn is_exact(&self, num: u64) -> bool {
        num > 0 && num < self.modulus && self.partner[num as usize] != SENTINEL
    }

    /// Conjugate numerator, if `num` has exact period `n`.
    pub fn partner_num(&self, num: u64) -> Option<u64> {
        if !self.is_exact(num) {
            return None;
        }
        Some(u64::from(self.partner[num as usize]))
    }
}

/// Doubling on period-`n` words is rotate-left on `n` bits.
pub(crate) fn rotl(num: u64, n: u32, by: u32) -> u64 {
    let by = by % n;
    let mask = (1u64 << n) - 1;
    ((num << by) | (num >> (n - by))) & mask
}

pub(crate) fn rotr(num: u64, n: u32, by: u32) -> u64 {
    rotl(num, n, n - (by % n))
}

struct Builder {
    tables: BTreeMap<u32, Arc<PairingTable>>,
}

fn builder() -> &'static Mutex<Builder> {
    static CELL: OnceLock<Mutex<Builder>> = OnceLock::new();
    CELL.get_or_init(|| Mutex::new(Builder { tables: BTreeMap::new() }))
}

/// The cached pairing table for one period. Builds all smaller periods first;
/// safe for concurrent use once returned.
pub fn pairing_table(period: u32) -> Result<Arc<PairingTable>> {
    if period == 0 {
        return Err(Error::Domain("period must be positive".into()));
    }
    if period > TABLE_LIMIT {
        return Err(Error::Resource(format!(
            "pairing tables are limited to period {TABLE_LIMIT} (got {period})"
        )));
    }
    let mut b = builder().lock().unwrap();
    if let Some(t) = b.tables.get(&period) {
        return Ok(t.clone());
    }
    let start = b.tables.keys().max().copied().unwrap_or(0) + 1;
    for m in start..=period {
        let table = build_period(&b.tables, m);
        b.tables.insert(m, Arc::new(table));
    }
    Ok(b.tables.get(&period).unwrap().clone())
}

/// Numerators of exact period `m` are those not divisible by
/// `(2^m - 1)/(2^d - 1)` for any maximal proper divisor `d` of `m`
/// (`d = m/p` over the distinct primes `p` of `m`).
fn exactness_moduli(m: u32) -> Vec<u64> {
    let mm = (1u64 << m) - 1;
    let mut out = Vec::new();
    let mut rest = m;
    let mut p = 2;
    while p * p <= m {
        if rest % p == 0 {
            out.push(mm / ((1u64 << (m / p)) - 1));
            while rest % p == 0 {
                rest /= p;
            }
        }
        p += 1;
    }
    if rest > 1 {
        out.push(mm / ((1u64 << (m / rest)) - 1));
    }
    out
}

// Sweep all chords of smaller periods in circular order and record, for every
// exact-period-m numerator, the innermost chord containing it. Two same-period
// angles can be joined without crossing the existing lamination iff those
// containers coincide.
fn containers_for_period(tables: &BTreeMap<u32, Arc<PairingTable>>, m: u32) -> Vec<u64> {
    let mm = (1u64 << m) - 1;
    const NO_CONTAINER: u64 = u64::MAX;
    let mut container = vec![NO_CONTAINER; mm as usize];

    struct Cursor {
        per: u32,
        modulus: u64,
        table: Arc<PairingTable>,
        num: u64,
    }
    impl Cursor {
        fn advance(&mut self) {
            self.num += 1;
            while self.num < self.modulus && !self.table.is_exact(self.num) {
                self.num += 1;
            }
        }
    }

    let mut cursors: Vec<Cursor> = tables
        .range(1..m)
        .map(|(&per, t)| {
            let mut c = Cursor { per, modulus: t.modulus(), table: t.clone(), num: 0 };
            c.advance();
            c
        })
        .collect();

    // heap of (num/modulus, cursor index), smallest fraction first
    #[derive(PartialEq, Eq)]
    struct Item {
        num: u64,
        modulus: u64,
        idx: usize,
    }
    impl Ord for Item {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            // reversed for a min-heap
            let left = u128::from(other.num) * u128::from(self.modulus);
            let right = u128::from(self.num) * u128::from(other.modulus);
            left.cmp(&right).then(other.idx.cmp(&self.idx))
        }
    }
    impl PartialOrd for Item {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }

    let mut heap = BinaryHeap::new();
    for (idx, c) in cursors.iter().enumerate() {
        if c.num < c.modulus {
            heap.push(Item { num: c.num, modulus: c.modulus, idx });
        }
    }

    let exact_mods = exactness_moduli(m);
    let mut open: Vec<(u32, u64)> = Vec::new();
    let mut j: u64 = 1;
    loop {
        let endpoint_next = heap.peek().map(|it| {
            u128::from(it.num) * u128::from(mm) < u128::from(j) * u128::from(it.modulus)
        });
        match endpoint_next {
            Some(true) => {
                let it = heap.pop().unwrap();
                let c = &mut cursors[it.idx];
                let p = c.table.partner_num(c.num).unwrap();
                if p > c.num {
                    open.push((c.per, c.num));
                } else {
                    let top = open.pop();
                    debug_assert_eq!(top, Some((c.per, p)), "lamination chords crossed");
                }
                c.advance();
                if c.num < c.modulus {
                    heap.push(Item { num: c.num, modulus: c.modulus, idx: it.idx });
                }
            }
            _ if j < mm => {
                if exact_mods.iter().all(|&q| j % q != 0) {
                    container[j as usize] = open
                        .last()
                        .map(|&(per, num)| (u64::from(per) << 56) | num)
                        .unwrap_or(NO_CONTAINER);
                }
                j += 1;
            }
            _ => break,
        }
    }
    debug_assert!(open.is_empty());
    container
}

fn build_period(tables: &BTreeMap<u32, Arc<PairingTable>>, m: u32) -> PairingTable {
    let mm = (1u64 << m) - 1;
    let mut partner = vec![SENTINEL; mm as usize];
    if m == 1 {
        // only the fixed angle 0 has period 1; it is excluded by convention
        return PairingTable { period: m, modulus: mm, partner };
    }
    let container = containers_for_period(tables, m);

    // doubly linked list over unmatched exact-period numerators
    let mut next = vec![0u32; mm as usize + 1];
    let mut prev = vec![0u32; mm as usize + 1];
    let exact_mods = exactness_moduli(m);
    let exacts: Vec<u64> =
        (1..mm).filter(|&j| exact_mods.iter().all(|&q| j % q != 0)).collect();

    if exacts.is_empty() {
        return PairingTable { period: m, modulus: mm, partner };
    }
    for w in exacts.windows(2) {
        next[w[0] as usize] = w[1] as u32;
        prev[w[1] as usize] = w[0] as u32;
    }
    let first = exacts[0];
    let last = *exacts.last().unwrap();
    next[last as usize] = 0; // 0 marks the end; angle 0 is never exact
    prev[first as usize] = 0;

    // Join the two closest unmatched angles whose chord crosses nothing,
    // repeatedly. Admissibility against the smaller-period lamination is
    // static, so every candidate pair needs at most one test.
    let mut heap: BinaryHeap<std::cmp::Reverse<(u64, u64)>> = BinaryHeap::new();
    for w in exacts.windows(2) {
        heap.push(std::cmp::Reverse((w[1] - w[0], w[0])));
    }
    let mut matched = 0u64;
    let total = exacts.len() as u64;
    while let Some(std::cmp::Reverse((gap, a))) = heap.pop() {
        let a = a as usize;
        if partner[a] != SENTINEL {
            continue;
        }
        let b = next[a] as usize;
        if b == 0 || (b as u64 - a as u64) != gap {
            continue; // stale entry
        }
        if container[a] != container[b] {
            continue; // chord would cross the lamination; pair is blocked
        }
        partner[a] = b as u32;
        partner[b] = a as u32;
        matched += 2;
        let pa = prev[a];
        let nb = next[b];
        next[pa as usize] = nb;
        prev[nb as usize] = pa;
        if pa != 0 && nb != 0 {
            heap.push(std::cmp::Reverse((u64::from(nb) - u64::from(pa), u64::from(pa))));
        }
    }
    assert_eq!(matched, total, "period-{m} pairing incomplete");
    PairingTable { period: m, modulus: mm, partner }
}

/// The conjugate (co-landing partner) of a periodic parameter angle.
///
/// For periods up to [`TABLE_LIMIT`] this is a table lookup; larger periods
/// use a per-angle kneading-sequence solver.
pub fn conjugate_angle(a: &Angle) -> Result<Angle> {
    if a.is_zero() {
        return Err(Error::Domain("angle 0 lands on the cardioid cusp alone".into()));
    }
    if !a.is_periodic() {
        return Err(Error::Domain(format!("conjugate angle needs a periodic angle, got {a}")));
    }
    let n = a.preperiod_period().period;
    if n <= TABLE_LIMIT {
        let t = pairing_table(n)?;
        let scale = t.modulus() / a.denominator() as u64;
        let num = a.numerator() as u64 * scale;
        let p = t
            .partner_num(num)
            .ok_or_else(|| Error::Domain(format!("{a} is not of exact period {n}")))?;
        Ok(Angle::new(u128::from(p), u128::from(t.modulus())))
    } else {
        conjugate_by_kneading(a)
    }
}

/// All roots of exact ray period `k`, ordered by their lower angle.
pub fn roots_of_period(k: u32) -> Result<Vec<RootPair>> {
    let t = pairing_table(k)?;
    let mm = t.modulus();
    let mut out = Vec::new();
    for num in 1..mm {
        if let Some(p) = t.partner_num(num) {
            if p > num {
                out.push(RootPair::from_pair(
                    Angle::new(u128::from(num), u128::from(mm)),
                    Angle::new(u128::from(p), u128::from(mm)),
                ));
            }
        }
    }
    Ok(out)
}

/// The `1/2`-satellite of a root, by word concatenation: the satellite's
/// characteristic words are `uv` and `vu` for component words `u`, `v`.
pub fn half_satellite(root: &RootPair) -> RootPair {
    let m = root.ray_period;
    let mm = (1u128 << m) - 1;
    let u = root.lo.numerator() * (mm / root.lo.denominator());
    let v = root.hi.numerator() * (mm / root.hi.denominator());
    let den = (1u128 << (2 * m)) - 1;
    let lo = Angle::new(u * (1u128 << m) + v, den);
    let hi = Angle::new(v * (1u128 << m) + u, den);
    RootPair { lo, hi, ray_period: 2 * m, satellite: true }
}

// ---------------------------------------------------------------------------
// Per-angle conjugate via kneading sequences.
//
// The itinerary of a periodic angle with respect to its own diameter
// partition determines the root; both characteristic angles realize the same
// itinerary. The word of the partner is recovered by solving the lexicographic
// constraints digit by digit.
// ---------------------------------------------------------------------------

fn conjugate_by_kneading(a: &Angle) -> Result<Angle> {
    let pp = a.preperiod_period();
    let n = pp.period;
    if n > 63 {
        return Err(Error::Resource(format!("period {n} beyond solver range")));
    }
    let mm = (1u64 << n) - 1;
    let w = (a.numerator() * u128::from(mm) / a.denominator()) as u64;
    // Roots in symmetric positions share a kneading sequence, so the solver
    // can return several words; the valid orbit portrait singles out the
    // characteristic partner.
    let sols = kneading_solutions(w, n);
    if !sols.contains(&w) {
        return Err(Error::Domain(format!("kneading constraints exclude {a} itself")));
    }
    let mut partners: Vec<u64> = sols
        .into_iter()
        .filter(|&v| v != w && portrait_partner_valid(w, v, n))
        .collect();
    if partners.len() != 1 {
        return Err(Error::Domain(format!(
            "expected a unique portrait partner for {a}, found {}",
            partners.len()
        )));
    }
    Ok(Angle::new(u128::from(partners.pop().unwrap()), u128::from(mm)))
}

/// Is `{a, b}` the characteristic pair of a valid orbit portrait?
///
/// Primitive case: the two orbits are disjoint, the forward chords of the
/// pair are pairwise unlinked, and the pair bounds the strictly shortest arc
/// of the chord family with no portrait angle inside. Satellite case: one
/// orbit forming a rotation set, the pair bounding its shortest gap.
pub(crate) fn portrait_partner_valid(a: u64, b: u64, n: u32) -> bool {
    let mm = (1u64 << n) - 1;
    if a == b {
        return false;
    }
    let orbit = |x: u64| -> Vec<u64> {
        let mut o = vec![x];
        let mut y = rotl(x, n, 1);
        while y != x {
            o.push(y);
            y = rotl(y, n, 1);
        }
        o
    };
    let oa = orbit(a);
    if oa.len() != n as usize {
        return false;
    }
    if oa.contains(&b) {
        // satellite: the full orbit must be a rotation set and `{a, b}` its
        // strictly shortest gap
        let mut sorted = oa.clone();
        sorted.sort();
        let pos = |x: u64| sorted.iter().position(|&y| y == x).unwrap();
        let step = pos(rotl(sorted[0], n, 1));
        for (i, &x) in sorted.iter().enumerate() {
            if pos(rotl(x, n, 1)) != (i + step) % n as usize {
                return false;
            }
        }
        let gap_len = |i: usize| {
            let next = sorted[(i + 1) % n as usize];
            (next + mm - sorted[i]) % mm
        };
        let (mut best, mut best_len) = (0, u64::MAX);
        for i in 0..n as usize {
            let l = gap_len(i);
            if l < best_len {
                best_len = l;
                best = i;
            }
        }
        let pair = (sorted[best], sorted[(best + 1) % n as usize]);
        pair == (a.min(b), a.max(b))
    } else {
        let ob = orbit(b);
        if ob.len() != n as usize {
            return false;
        }
        // pairwise unlinked forward chords
        let chords: Vec<(u64, u64)> =
            (0..n).map(|t| (rotl(a, n, t), rotl(b, n, t))).collect();
        let inside = |(x, y): (u64, u64), z: u64| -> bool {
            // strictly inside the arc from x counterclockwise to y
            if x < y {
                x < z && z < y
            } else {
                z > x || z < y
            }
        };
        for i in 0..chords.len() {
            for j in 0..chords.len() {
                if i == j {
                    continue;
                }
                let (c, d) = chords[j];
                if inside(chords[i], c) != inside(chords[i], d) {
                    return false;
                }
            }
        }
        // the characteristic arc: strictly shortest chord arc, free of
        // portrait angles
        let arc_len = |(x, y): (u64, u64)| {
            let d = (y + mm - x) % mm;
            d.min(mm - d)
        };
        let char_len = arc_len(chords[0]);
        if chords.iter().skip(1).any(|&c| arc_len(c) <= char_len) {
            return false;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        if hi - lo != char_len {
            return false; // the short side must avoid angle zero
        }
        oa.iter()
            .chain(ob.iter())
            .all(|&z| z == a || z == b || !(lo < z && z < hi))
    }
}

/// All period-`n` words realizing the kneading sequence of `w`; for a valid
/// periodic angle these are exactly the two characteristic angles of its root.
pub(crate) fn kneading_solutions(w: u64, n: u32) -> Vec<u64> {
    let n = n as usize;
    let mm = (1u64 << n) - 1;
    // symbol[i] for the (i+1)-st itinerary entry, i = 0..n-1; true = the arc
    // containing the angle itself, false = the arc containing 0
    // x_{i+1} = 2^i * a has word rot_i(w); symbol[i] records its itinerary
    // entry. The last entry hits a partition boundary and carries no symbol.
    let mut symbol = vec![false; n];
    for i in 0..n - 1 {
        let ri = rotl(w, n as u32, i as u32);
        let two_r = 2 * u128::from(ri);
        symbol[i] = u128::from(w) < two_r && two_r < u128::from(w) + u128::from(mm);
    }

    let digit = |word: &[i8], idx: usize| word[idx % word.len()];
    // compare rot_i(v) vs v with partially assigned digits: 1 = greater,
    // -1 = smaller, 0 = undecided
    let partial_cmp = |v: &[i8], i: usize| -> i8 {
        for j in 0..v.len() {
            let x = digit(v, i + j);
            let y = digit(v, j);
            if x < 0 || y < 0 {
                return 0;
            }
            if x != y {
                return if x > y { 1 } else { -1 };
            }
        }
        2 // equal over a full period: not primitive
    };

    let mut v = vec![-1i8; n];
    let mut sols = Vec::new();
    // depth-first over digits with constraint propagation
    fn dfs(
        v: &mut Vec<i8>,
        d: usize,
        n: usize,
        symbol: &[bool],
        partial_cmp: &dyn Fn(&[i8], usize) -> i8,
        sols: &mut Vec<u64>,
    ) {
        // check all constraints whose trigger digit is known
        for i in 1..n {
            let vi = v[i - 1];
            if vi < 0 {
                continue;
            }
            let want_gt = symbol[i - 1] == (vi == 0);
            let c = partial_cmp(v, i);
            if c == 2 {
                return; // non-primitive
            }
            if c != 0 && (c == 1) != want_gt {
                return;
            }
        }
        if d == n {
            let word = v.iter().fold(0u64, |acc, &b| acc * 2 + b as u64);
            sols.push(word);
            return;
        }
        for bit in 0..2i8 {
            v[d] = bit;
            dfs(v, d + 1, n, symbol, partial_cmp, sols);
        }
        v[d] = -1;
    }
    dfs(&mut v, 0, n, &symbol, &partial_cmp, &mut sols);
    sols
}

// ---------------------------------------------------------------------------
// Wakes and limbs of the main cardioid.
// ---------------------------------------------------------------------------

/// Angles of the rotation cycle with rotation number `k/r`, sorted.
///
/// Under doubling the sorted cycle is rotated by `k/r`; these are the angles
/// landing at the dividing fixed point for parameters in the `k/r`-limb.
pub fn alpha_cycle(limb: Limb) -> Vec<Angle> {
    let (k, r) = (limb.k, limb.r);
    assert!(r <= 120, "rotation cycle denominator too large");
    let den = (1u128 << r) - 1;
    (1..=r)
        .map(|j| {
            let mut num: u128 = 0;
            for i in 0..r {
                num <<= 1;
                if (j - 1 + i * k) % r >= r - k {
                    num |= 1;
                }
            }
            Angle::new(num, den)
        })
        .collect()
}

/// The characteristic angle pair bounding the `k/r`-wake of the cardioid.
pub fn wake_angles(limb: Limb) -> RootPair {
    let cycle = alpha_cycle(limb);
    let lo = cycle[(limb.k - 1) as usize];
    let hi = cycle[limb.k as usize];
    debug_assert!(lo < hi);
    RootPair { lo, hi, ray_period: limb.r, satellite: true }
}

/// Angles landing at the preimage `-alpha` of the dividing fixed point.
pub fn minus_alpha_angles(limb: Limb) -> Vec<Angle> {
    let mut out: Vec<Angle> = alpha_cycle(limb).iter().map(|a| a.opposite()).collect();
    out.sort();
    out
}

/// The unique angle of preperiod 1 and period `r` inside the `k/r`-wake:
/// the midpoint of the two wake angles.
pub fn preperiod_one_angle(limb: Limb) -> Angle {
    let w = wake_angles(limb);
    w.lo.midpoint(&w.hi)
}

/// The limb whose wake strictly contains `a`, found by Stern-Brocot descent
/// on rotation numbers. Wake boundary angles themselves return `None`.
pub fn limb_of(a: &Angle) -> Option<Limb> {
    if a.is_zero() {
        return None;
    }
    let (mut lk, mut lr) = (0u32, 1u32);
    let (mut hk, mut hr) = (1u32, 1u32);
    loop {
        let (k, r) = (lk + hk, lr + hr);
        if r > 120 {
            return None;
        }
        let w = wake_angles(Limb { k, r });
        if *a == w.lo || *a == w.hi {
            return None;
        }
        if w.wake_contains(a) {
            return Some(Limb { k, r });
        }
        if *a < w.lo {
            hk = k;
            hr = r;
        } else {
            lk = k;
            lr = r;
        }
    }
}

/// The cardioid-to-real-axis angle correspondence `T = 1/2 + t/4`,
/// defined for `t` in `[0, 1/3]`.
pub fn douady_magic(theta: &Angle) -> Result<Angle> {
    let third = Angle::new(1, 3);
    if *theta > third {
        return Err(Error::Domain(format!("douady magic formula needs t <= 1/3, got {theta}")));
    }
    let quarter = Angle::new(
        theta.numerator(),
        theta.denominator().checked_mul(4).expect("angle arithmetic overflow"),
    );
    Ok(Angle::new(1, 2).plus(&quarter))
}

/// The proof obligation behind the real-axis correspondence: the forbidden
/// arc `((t+1)/4, (t+2)/4)` that the orbit of `T` must avoid.
pub fn douady_forbidden_arc(theta: &Angle) -> CircularArc {
    let den4 = theta.denominator().checked_mul(4).expect("angle arithmetic overflow");
    let from = Angle::new(theta.numerator() + theta.denominator(), den4);
    let to = Angle::new(theta.numerator() + 2 * theta.denominator(), den4);
    CircularArc::open(from, to)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn limb(k: u32, r: u32) -> Limb {
        Limb::new(k, r).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate_angle(&a("9/31")).unwrap(), a("10/31"));
        assert_eq!(conjugate_angle(&a("3/7")).unwrap(), a("4/7"));
        assert_eq!(conjugate_angle(&a("1/3")).unwrap(), a("2/3"));
        assert_eq!(conjugate_angle(&a("11/31")).unwrap(), a("12/31"));
        assert!(conjugate_angle(&Angle::ZERO).is_err());
        assert!(conjugate_angle(&a("1/4")).is_err());
    }

    #[test]
    fn conjugate_is_fixed_point_free_involution() {
        for n in 2..=12u32 {
            let mm = (1u128 << n) - 1;
            let t = pairing_table(n).unwrap();
            for num in 1..mm {
                let x = Angle::new(num, mm);
                if x.preperiod_period().period != n {
                    assert!(t.partner_num(num as u64).is_none());
                    continue;
                }
                let y = conjugate_angle(&x).unwrap();
                assert_ne!(x, y);
                assert_eq!(conjugate_angle(&y).unwrap(), x);
                assert_eq!(y.preperiod_period().period, n);
            }
        }
    }

    #[test]
    fn tuned_half_satellites_are_paired() {
        // the 1/2-satellite of a root has characteristic words uv and vu
        for n in 2..=8u32 {
            for root in roots_of_period(n).unwrap() {
                let sat = half_satellite(&root);
                assert_eq!(conjugate_angle(&sat.lo()).unwrap(), sat.hi(), "root {root:?}");
                assert!(sat.is_satellite());
            }
        }
    }

    #[test]
    fn roots_of_small_periods() {
        assert!(roots_of_period(1).unwrap().is_empty());
        let r2 = roots_of_period(2).unwrap();
        assert_eq!(r2.len(), 1);
        assert_eq!((r2[0].lo(), r2[0].hi()), (a("1/3"), a("2/3")));

        let r3 = roots_of_period(3).unwrap();
        let pairs: Vec<(Angle, Angle)> = r3.iter().map(|r| (r.lo(), r.hi())).collect();
        assert_eq!(
            pairs,
            vec![(a("1/7"), a("2/7")), (a("3/7"), a("4/7")), (a("5/7"), a("6/7"))]
        );

        // the matching is perfect on non-dyadic angles of each exact period
        for n in 2..=13u32 {
            let t = pairing_table(n).unwrap();
            let mm = t.modulus();
            for num in 1..mm {
                let x = Angle::new(u128::from(num), u128::from(mm));
                assert_eq!(
                    t.partner_num(num).is_some(),
                    x.preperiod_period().period == n,
                    "num {num} period {n}"
                );
            }
        }
    }

    #[test]
    fn satellite_flags() {
        let sat = |x: Angle| RootPair::of_angle(&x).unwrap().is_satellite();
        assert!(sat(a("1/7")));
        assert!(!sat(a("3/7")));
        assert!(sat(a("1/3")));
        assert!(sat(a("9/31")));
        assert!(!sat(Angle::new(3, 15)));
        assert!(sat(Angle::new(6, 15))); // the 1/2-satellite of the period-2 component
    }

    #[test]
    fn wake_angle_examples() {
        let w = wake_angles(limb(1, 3));
        assert_eq!((w.lo(), w.hi()), (a("1/7"), a("2/7")));
        let w = wake_angles(limb(2, 5));
        assert_eq!((w.lo(), w.hi()), (a("9/31"), a("10/31")));
        let w = wake_angles(limb(1, 2));
        assert_eq!((w.lo(), w.hi()), (a("1/3"), a("2/3")));
    }

    #[test]
    fn cardioid_satellite_wakes_are_narrow() {
        // adjacent numerators j/(2^r-1), (j+1)/(2^r-1)
        for r in 2..=10u32 {
            for k in 1..r {
                if gcd_u32(k, r) != 1 {
                    continue;
                }
                let w = wake_angles(limb(k, r));
                assert_eq!(w.lo().denominator(), w.hi().denominator());
                assert_eq!(w.lo().numerator() + 1, w.hi().numerator(), "wake {k}/{r}");
                // and the pairing table agrees with the rotation construction
                assert_eq!(conjugate_angle(&w.lo()).unwrap(), w.hi());
            }
        }
    }

    #[test]
    fn alpha_cycles() {
        assert_eq!(alpha_cycle(limb(1, 3)), vec![a("1/7"), a("2/7"), a("4/7")]);
        assert_eq!(
            alpha_cycle(limb(2, 5)),
            vec![a("5/31"), a("9/31"), a("10/31"), a("18/31"), a("20/31")]
        );
        assert_eq!(alpha_cycle(limb(1, 2)), vec![a("1/3"), a("2/3")]);
    }

    #[test]
    fn alpha_cycle_is_rigid_rotation() {
        for r in 2..=12u32 {
            for k in 1..r {
                if gcd_u32(k, r) != 1 {
                    continue;
                }
                let cycle = alpha_cycle(limb(k, r));
                for (j, x) in cycle.iter().enumerate() {
                    let image = x.double();
                    let pos = cycle.iter().position(|y| *y == image).expect("cycle closed");
                    assert_eq!(pos as u32, (j as u32 + k) % r, "rotation {k}/{r}");
                }
            }
        }
    }

    #[test]
    fn minus_alpha_examples() {
        assert_eq!(minus_alpha_angles(limb(1, 2)), vec![a("1/6"), a("5/6")]);
        assert_eq!(
            minus_alpha_angles(limb(2, 5)),
            vec![a("5/62"), a("9/62"), a("41/62"), a("49/62"), a("51/62")]
        );
        assert_eq!(minus_alpha_angles(limb(1, 3)), vec![a("1/14"), a("9/14"), a("11/14")]);
        // each doubles into the alpha cycle
        for r in 2..=8 {
            for k in 1..r {
                if gcd_u32(k, r) != 1 {
                    continue;
                }
                let cycle = alpha_cycle(limb(k, r));
                for x in minus_alpha_angles(limb(k, r)) {
                    assert!(cycle.contains(&x.double()));
                }
            }
        }
    }

    #[test]
    fn preperiod_one_examples() {
        assert_eq!(preperiod_one_angle(limb(1, 3)), a("3/14"));
        assert_eq!(preperiod_one_angle(limb(2, 5)), a("19/62"));
        assert_eq!(preperiod_one_angle(limb(1, 2)), a("1/2"));
        let t = preperiod_one_angle(limb(2, 5));
        let pp = t.preperiod_period();
        assert_eq!((pp.preperiod, pp.period), (1, 5));
        assert!(wake_angles(limb(2, 5)).wake_contains(&t));
    }

    #[test]
    fn limb_of_examples() {
        assert_eq!(limb_of(&a("19/62")), Some(limb(2, 5)));
        assert_eq!(limb_of(&a("1/4")), Some(limb(1, 3)));
        assert_eq!(limb_of(&a("5/12")), Some(limb(1, 2)));
        assert_eq!(limb_of(&a("1/3")), None); // wake boundary
        assert_eq!(limb_of(&Angle::ZERO), None);
    }

    #[test]
    fn douady_magic_examples() {
        assert_eq!(douady_magic(&a("1/3")).unwrap(), a("7/12"));
        assert_eq!(douady_magic(&Angle::ZERO).unwrap(), a("1/2"));
        assert_eq!(douady_magic(&a("1/7")).unwrap(), a("15/28"));
        assert!(douady_magic(&a("1/2")).is_err());
    }

    #[test]
    fn wake_contains_examples() {
        assert!(wake_angles(limb(2, 5)).wake_contains(&a("19/62")));
        let basilica = RootPair::of_angle(&a("1/3")).unwrap();
        assert!(!basilica.wake_contains(&Angle::ZERO));
        let airplane = RootPair::of_angle(&a("3/7")).unwrap();
        assert!(!airplane.wake_contains(&a("5/12")));
    }

    #[test]
    fn orbit_portrait_validity() {
        // forward images of the characteristic chord are pairwise unlinked
        // and none crosses the characteristic chord
        for n in 2..=9u32 {
            for root in roots_of_period(n).unwrap() {
                let mut chords = Vec::new();
                let (mut x, mut y) = (root.lo(), root.hi());
                for _ in 0..n {
                    chords.push((x, y));
                    x = x.double();
                    y = y.double();
                }
                for i in 0..chords.len() {
                    for j in i + 1..chords.len() {
                        let (a1, b1) = chords[i];
                        let (a2, b2) = chords[j];
                        if a1 == a2 || a1 == b2 || b1 == a2 || b1 == b2 {
                            continue; // satellite chords share points
                        }
                        let arc = CircularArc::open(a1, b1);
                        assert!(
                            !arc.crosses_chord(&a2, &b2),
                            "portrait of {root:?} self-crosses"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn kneading_solver_matches_tables() {
        for n in 2..=14u32 {
            let t = pairing_table(n).unwrap();
            let mm = t.modulus();
            for num in 1..mm {
                if let Some(p) = t.partner_num(num) {
                    let sols = kneading_solutions(num, n);
                    assert!(sols.contains(&num), "period {n} num {num}");
                    assert!(sols.contains(&p), "period {n}: {num} vs table {p}");
                    let filtered: Vec<u64> = sols
                        .into_iter()
                        .filter(|&v| v != num && portrait_partner_valid(num, v, n))
                        .collect();
                    assert_eq!(filtered, vec![p], "period {n} num {num}");
                }
            }
        }
    }
}
