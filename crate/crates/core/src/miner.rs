//! Exhaustive census of maximal periodic ray connections by ray period.
//!
//! A periodic ray connection alternates pinching points on the two sides of a
//! formal mating; every pinch is a forward image of the characteristic pair
//! of a root before the respective parameter, and all angles share one exact
//! period. Working with numerators over `2^n - 1` (doubling = rotate left),
//! the search runs over all roots as seeds, grows a chain on one side of the
//! seed's characteristic point through conjugate angles of orbit iterates, and
//! keeps the chains that cannot be continued for their labeling parameters.
//! Reaching a satellite-type pinching point doubles the recorded length and
//! stops: such a point is the middle of its class.
//!
//! Counts are of unordered pairs of the innermost (deepest) roots on the two
//! sides; a parameter pair is counted once per realized length, split into
//! primitive-only and satellite-bearing columns.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::angle::Angle;
use crate::params::{
    self, half_satellite, kneading_solutions, pairing_table, roots_of_period, rotl, rotr,
    RootPair, TABLE_LIMIT,
};
use crate::{Error, Result};

/// Census cell counts: length -> (primitive-only pairs, satellite pairs).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub period: u32,
    pub cells: BTreeMap<u32, (u64, u64)>,
}

impl SearchResult {
    /// CSV rows `period,length,primitive,satellite` (no header).
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for (len, (p, s)) in &self.cells {
            out.push_str(&format!("{},{},{},{}\n", self.period, len, p, s));
        }
        out
    }
}

/// Options for the census.
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub jobs: usize,
    /// Restrict seeds to 1/2-satellite roots (the deep-period mode).
    pub satellite_only: bool,
    /// Keep witness chains for connections at least this long.
    pub keep_chains_from: u32,
    /// Take only the first continuing root per step instead of branching.
    pub greedy: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { jobs: 1, satellite_only: false, keep_chains_from: 10, greedy: false }
    }
}

/// Side of the mating a pinching point lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    P,
    Q,
}

impl Side {
    fn flip(self) -> Side {
        match self {
            Side::P => Side::Q,
            Side::Q => Side::P,
        }
    }
}

/// One pinching point of a chain: the root providing it and the shift
/// exponent mapping the characteristic pair onto the pinch pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLink {
    pub side: Side,
    pub root: RootPair,
    pub shift: u32,
}

/// A maximal ray connection, recorded by its rays and roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionChain {
    pub period: u32,
    /// The grown arc of rays; for satellite connections this is one arm, the
    /// full class being the star of its iterates around the satellite point.
    pub rays: Vec<Angle>,
    pub links: Vec<ChainLink>,
    /// Number of rays of the maximal connection (doubled across the
    /// satellite middle when present).
    pub length: u32,
    pub satellite: bool,
    /// Innermost root labeling the p side.
    pub p_root: RootPair,
    /// Innermost root labeling the q side, in q-parameter coordinates.
    pub q_root: RootPair,
}

/// Outcome of a single extension step.
#[derive(Clone, Debug)]
pub enum ExtendOutcome {
    /// The unique continuation was appended.
    Extended(Chain),
    /// Several roots continue the chain into different veins.
    Branched(Vec<Chain>),
    /// A satellite pinching point was reached: length doubles and the chain
    /// stops.
    SatelliteStop(Chain),
    /// No continuation exists.
    Maximal,
}

// conjugate-angle source: full table for small periods, kneading solver with
// a memo map beyond
enum ConjSource {
    Table(std::sync::Arc<params::PairingTable>),
    Solver(Mutex<HashMap<u64, u64>>),
}

pub(crate) struct Ctx {
    n: u32,
    mm: u64,
    conj: ConjSource,
}

impl Ctx {
    fn new(period: u32) -> Result<Ctx> {
        let mm = (1u64 << period) - 1;
        let conj = if period <= TABLE_LIMIT {
            ConjSource::Table(pairing_table(period)?)
        } else {
            ConjSource::Solver(Mutex::new(HashMap::new()))
        };
        Ok(Ctx { n: period, mm, conj })
    }

    fn conj(&self, x: u64) -> u64 {
        match &self.conj {
            ConjSource::Table(t) => t.partner_num(x).expect("exact-period angle"),
            ConjSource::Solver(memo) => {
                if let Some(&c) = memo.lock().unwrap().get(&x) {
                    return c;
                }
                let sols = kneading_solutions(x, self.n);
                assert_eq!(sols.len(), 2, "kneading solutions for {x} at period {}", self.n);
                let c = if sols[0] == x { sols[1] } else { sols[0] };
                let mut memo = memo.lock().unwrap();
                memo.insert(x, c);
                memo.insert(c, x);
                c
            }
        }
    }

    fn root_of(&self, x: u64) -> (u64, u64) {
        let c = self.conj(x);
        (x.min(c), x.max(c))
    }

    fn is_satellite(&self, root: (u64, u64)) -> bool {
        let mut y = rotl(root.0, self.n, 1);
        while y != root.0 {
            if y == root.1 {
                return true;
            }
            y = rotl(y, self.n, 1);
        }
        false
    }

    fn angle(&self, x: u64) -> Angle {
        Angle::new(u128::from(x), u128::from(self.mm))
    }

    fn root_pair(&self, root: (u64, u64)) -> RootPair {
        RootPair::from_numerators(root.0, root.1, self.n, self.is_satellite(root))
    }

    fn exact_period(&self, x: u64) -> bool {
        let mut y = rotl(x, self.n, 1);
        let mut k = 1;
        while y != x {
            y = rotl(y, self.n, 1);
            k += 1;
        }
        k == self.n
    }
}

// wake arcs of same-period roots never contain the zero angle, so plain
// numerator comparisons decide containment and nesting

fn wake_inside(inner: (u64, u64), outer: (u64, u64)) -> bool {
    outer.0 < inner.0 && inner.1 < outer.1
}

fn comparable(a: (u64, u64), b: (u64, u64)) -> bool {
    wake_inside(a, b) || wake_inside(b, a)
}

/// A chain under construction (also the public single-step API state).
#[derive(Clone, Debug)]
pub struct Chain {
    period: u32,
    rays: Vec<u64>,
    used: Vec<u64>,
    links: Vec<(Side, (u64, u64), u32)>,
    p_roots: Vec<(u64, u64)>,
    q_roots: Vec<(u64, u64)>,
    /// Side of the landing point at the far end of the last ray.
    grow_side: Side,
    /// True once a satellite point stopped the chain.
    satellite: bool,
    /// For satellite-seeded chains the rays of the star center count once.
    star_seeded: bool,
    /// The satellite root and its side, once one is part of the chain.
    sat_link: Option<(Side, (u64, u64))>,
}

#[derive(Clone, Copy)]
struct Candidate {
    shift: u32,
    root: (u64, u64),
    partner: u64,
    satellite: bool,
}

impl Chain {
    fn side_roots(&self, side: Side) -> &Vec<(u64, u64)> {
        match side {
            Side::P => &self.p_roots,
            Side::Q => &self.q_roots,
        }
    }

    fn innermost(&self, side: Side) -> Option<(u64, u64)> {
        self.side_roots(side)
            .iter()
            .copied()
            .min_by_key(|r| r.1 - r.0)
    }

    /// Label of a side: the deepest root, except that a satellite pinching
    /// point labels its side by the satellite root (the middle of the class).
    fn label_root(&self, side: Side) -> Option<(u64, u64)> {
        if let Some((s, root)) = self.sat_link {
            if s == side {
                return Some(root);
            }
        }
        self.innermost(side)
    }

    fn push(&mut self, side: Side, cand: &Candidate) {
        self.rays.push(cand.partner);
        self.used.push(cand.partner);
        self.links.push((side, cand.root, cand.shift));
        match side {
            Side::P => self.p_roots.push(cand.root),
            Side::Q => self.q_roots.push(cand.root),
        }
        self.grow_side = side.flip();
    }
}

struct Search<'a> {
    ctx: &'a Ctx,
    opts: SearchOptions,
    found: HashMap<(((u64, u64), (u64, u64)), u32, bool), Option<Chain>>,
}

impl<'a> Search<'a> {
    fn new(ctx: &'a Ctx, opts: SearchOptions) -> Search<'a> {
        Search { ctx, opts, found: HashMap::new() }
    }

    /// Continuations of the chain at angle `x`, whose far landing point lies
    /// on `side`: for each orbit shift, the root of the iterate and the
    /// partner angle pulled back along the orbit.
    fn candidates(&self, chain: &Chain, x: u64, side: Side) -> Vec<Candidate> {
        let n = self.ctx.n;
        let mut out = Vec::new();
        for t in 0..n {
            let y = rotl(x, n, t);
            let root = self.ctx.root_of(y);
            let partner = rotr(self.ctx.conj(y), n, t);
            if chain.used.contains(&partner) {
                continue;
            }
            if chain.side_roots(side).contains(&root) {
                continue; // a root pinches one point of a finite arc only
            }
            let sat = self.ctx.is_satellite(root);
            if out.iter().any(|c: &Candidate| c.root == root && c.partner == partner) {
                continue;
            }
            out.push(Candidate { shift: t, root, partner, satellite: sat });
        }
        out
    }

    fn nested_with_all(&self, chain: &Chain, side: Side, root: (u64, u64)) -> bool {
        chain.side_roots(side).iter().all(|r| comparable(root, *r))
    }

    /// A free end is dead iff no continuation exists for parameters behind
    /// the current roots: no candidate root comparable with everything used
    /// on that side.
    fn end_is_dead(&self, chain: &Chain, x: u64, side: Side) -> bool {
        self.candidates(chain, x, side)
            .iter()
            .all(|c| !self.nested_with_all(chain, side, c.root))
    }

    fn emit(&mut self, chain: &Chain) {
        let length = if chain.satellite || chain.star_seeded {
            2 * chain.rays.len() as u32
        } else {
            chain.rays.len() as u32
        };
        if length < 5 {
            return;
        }
        let satellite = chain.satellite
            || chain.star_seeded
            || chain.links.iter().any(|(_, r, _)| self.ctx.is_satellite(*r));
        let (Some(p_label), Some(q_label)) =
            (chain.label_root(Side::P), chain.label_root(Side::Q))
        else {
            return;
        };
        let mm = self.ctx.mm;
        let q_param = (mm - q_label.1, mm - q_label.0);
        let pair = if p_label <= q_param { (p_label, q_param) } else { (q_param, p_label) };
        let key = (pair, length, satellite);
        let keep = length >= self.opts.keep_chains_from;
        let entry = self.found.entry(key).or_insert(None);
        if keep {
            let better = match entry {
                None => true,
                Some(old) => chain.rays < old.rays,
            };
            if better {
                *entry = Some(chain.clone());
            }
        }
    }

    /// Depth-first growth from the current chain end. A chain is recorded
    /// only when neither end can be continued for parameters behind its
    /// labeling roots.
    fn grow(&mut self, chain: &Chain, free_end: Option<(u64, Side)>) {
        let side = chain.grow_side;
        let x = *chain.rays.last().unwrap();
        let compatible: Vec<Candidate> = self
            .candidates(chain, x, side)
            .into_iter()
            .filter(|c| self.nested_with_all(chain, side, c.root))
            .collect();

        if compatible.is_empty() {
            let ends_ok = !chain.q_roots.is_empty()
                && match free_end {
                    Some((fx, fside)) => self.end_is_dead(chain, fx, fside),
                    None => true,
                };
            if ends_ok {
                self.emit(chain);
            }
            return;
        }
        let take: Vec<Candidate> = if self.opts.greedy {
            let pick = match std::env::var("MINER_GREEDY").as_deref() {
                Ok("deep") => compatible
                    .iter()
                    .min_by_key(|c| c.root.1 - c.root.0)
                    .copied()
                    .unwrap(),
                Ok("shallow") => compatible
                    .iter()
                    .max_by_key(|c| c.root.1 - c.root.0)
                    .copied()
                    .unwrap(),
                Ok("last") => *compatible.last().unwrap(),
                _ => compatible[0],
            };
            vec![pick]
        } else {
            compatible
        };
        for cand in take {
            if cand.satellite {
                // the satellite point is the middle of its class: double and
                // stop (the other arms are iterates of this one)
                let mut stopped = chain.clone();
                stopped.links.push((side, cand.root, cand.shift));
                match side {
                    Side::P => stopped.p_roots.push(cand.root),
                    Side::Q => stopped.q_roots.push(cand.root),
                }
                stopped.satellite = true;
                stopped.sat_link = Some((side, cand.root));
                let ends_ok = match free_end {
                    Some((fx, fside)) => self.end_is_dead(&stopped, fx, fside),
                    None => true,
                };
                if ends_ok {
                    self.emit(&stopped);
                }
                continue;
            }
            let mut next = chain.clone();
            next.push(side, &cand);
            self.grow(&next, free_end);
        }
    }

    /// Seed at a primitive root: the chain ends at the characteristic point
    /// and grows through the other characteristic ray.
    fn run_primitive_seed(&mut self, root: (u64, u64)) {
        for (free, growv) in [(root.0, root.1), (root.1, root.0)] {
            let chain = Chain {
                period: self.ctx.n,
                rays: vec![free, growv],
                used: vec![free, growv],
                links: vec![(Side::P, root, 0)],
                p_roots: vec![root],
                q_roots: vec![],
                grow_side: Side::Q,
                satellite: false,
                star_seeded: false,
                sat_link: None,
            };
            self.grow(&chain, Some((free, Side::Q)));
        }
    }

    /// Seed at a satellite root: grow one arm out of the star center; the
    /// connection is the star of its iterates, so the length doubles.
    fn run_satellite_seed(&mut self, root: (u64, u64)) {
        let n = self.ctx.n;
        // rays at the star center: the orbit of the characteristic angles
        // under the return map of the underlying component
        let mut center = vec![root.0];
        let mut m = 1;
        while m < n {
            if rotl(root.0, n, m) == root.1 {
                break;
            }
            m += 1;
        }
        let mut y = rotl(root.0, n, m);
        while y != root.0 {
            center.push(y);
            y = rotl(y, n, m);
        }
        let chain = Chain {
            period: n,
            rays: vec![root.1],
            used: center,
            links: vec![(Side::P, root, 0)],
            p_roots: vec![root],
            q_roots: vec![],
            grow_side: Side::Q,
            satellite: false,
            star_seeded: true,
            sat_link: Some((Side::P, root)),
        };
        self.grow_arm(&chain);
    }

    /// Arm growth for star-seeded chains: satellite candidates cannot occur
    /// again (one branch point per class), stops count doubled rays.
    fn grow_arm(&mut self, chain: &Chain) {
        let side = chain.grow_side;
        let x = *chain.rays.last().unwrap();
        let compatible: Vec<Candidate> = self
            .candidates(chain, x, side)
            .into_iter()
            .filter(|c| !c.satellite && self.nested_with_all(chain, side, c.root))
            .collect();
        if compatible.is_empty() {
            if !chain.q_roots.is_empty() {
                self.emit(chain);
            }
            return;
        }
        let take: Vec<Candidate> =
            if self.opts.greedy { vec![compatible[0]] } else { compatible };
        for cand in take {
            let mut next = chain.clone();
            next.push(side, &cand);
            self.grow_arm(&next);
        }
    }

    fn into_results(self, ctx: &Ctx) -> (BTreeMap<u32, (u64, u64)>, Vec<ConnectionChain>) {
        let mut cells: BTreeMap<u32, (u64, u64)> = BTreeMap::new();
        let mut chains = Vec::new();
        for ((pair, length, satellite), witness) in self.found {
            let cell = cells.entry(length).or_insert((0, 0));
            if satellite {
                cell.1 += 1;
            } else {
                cell.0 += 1;
            }
            let _ = pair;
            if let Some(chain) = witness {
                chains.push(finish_chain(ctx, &chain, length, satellite));
            }
        }
        chains.sort_by(|a, b| (a.length, &a.rays).cmp(&(b.length, &b.rays)));
        (cells, chains)
    }
}

fn finish_chain(ctx: &Ctx, chain: &Chain, length: u32, satellite: bool) -> ConnectionChain {
    let p_label = chain.label_root(Side::P).expect("labeled chain");
    let q_label = chain.label_root(Side::Q).expect("labeled chain");
    let q_param = (ctx.mm - q_label.1, ctx.mm - q_label.0);
    ConnectionChain {
        period: ctx.n,
        rays: chain.rays.iter().map(|&x| ctx.angle(x)).collect(),
        links: chain
            .links
            .iter()
            .map(|(side, root, shift)| ChainLink {
                side: *side,
                root: ctx.root_pair(*root),
                shift: *shift,
            })
            .collect(),
        length,
        satellite,
        p_root: ctx.root_pair(p_label),
        q_root: ctx.root_pair(q_param),
    }
}

fn seeds_for(ctx: &Ctx, opts: &SearchOptions) -> Result<Vec<(u64, u64)>> {
    let n = ctx.n;
    if n <= TABLE_LIMIT {
        let roots = roots_of_period(n)?;
        let mm = ctx.mm;
        let scale = |a: &Angle| (a.numerator() * u128::from(mm) / a.denominator()) as u64;
        Ok(roots
            .iter()
            .filter(|r| {
                if opts.satellite_only {
                    r.is_satellite()
                } else {
                    true
                }
            })
            .map(|r| (scale(&r.lo()), scale(&r.hi())))
            .collect())
    } else {
        if !opts.satellite_only {
            return Err(Error::Resource(format!(
                "full census beyond period {TABLE_LIMIT} needs --satellite-only"
            )));
        }
        if n % 2 != 0 {
            return Err(Error::Domain(
                "the satellite-only deep search generates 1/2-satellites of half the period"
                    .into(),
            ));
        }
        let mm = ctx.mm;
        let mut out = Vec::new();
        for root in roots_of_period(n / 2)? {
            let sat = half_satellite(&root);
            let scale = |a: &Angle| (a.numerator() * u128::from(mm) / a.denominator()) as u64;
            out.push((scale(&sat.lo()), scale(&sat.hi())));
        }
        Ok(out)
    }
}

fn run_search(period: u32, opts: SearchOptions) -> Result<(SearchResult, Vec<ConnectionChain>)> {
    if period < 2 {
        return Err(Error::Domain("search needs ray period >= 2".into()));
    }
    let ctx = Ctx::new(period)?;
    let seeds = seeds_for(&ctx, &opts)?;
    let jobs = opts.jobs.max(1).min(seeds.len().max(1));
    let chunks: Vec<&[(u64, u64)]> = if jobs <= 1 {
        vec![&seeds]
    } else {
        seeds.chunks(seeds.len().div_ceil(jobs)).collect()
    };
    let searches: Vec<Search> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                let ctx = &ctx;
                scope.spawn(move || {
                    let mut s = Search::new(ctx, opts);
                    let skip_b = std::env::var("MINER_NO_B").is_ok();
                    let skip_a_sat = std::env::var("MINER_NO_A_SAT").is_ok();
                    let _ = skip_a_sat;
                    for &root in chunk {
                        if ctx.is_satellite(root) {
                            if !skip_b { s.run_satellite_seed(root); }
                        } else if !opts.satellite_only {
                            s.run_primitive_seed(root);
                        }
                    }
                    s
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("search worker")).collect()
    });
    // exact merge: identical keys keep the lexicographically smallest witness
    let mut merged = Search::new(&ctx, opts);
    for s in searches {
        for (key, witness) in s.found {
            match merged.found.entry(key) {
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(witness);
                }
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    if let Some(new) = witness {
                        let better = match e.get() {
                            None => true,
                            Some(old) => new.rays < old.rays,
                        };
                        if better {
                            e.insert(Some(new));
                        }
                    }
                }
            }
        }
    }
    let (cells, chains) = merged.into_results(&ctx);
    Ok((SearchResult { period, cells }, chains))
}

/// Exact counts of maximal periodic ray connections for one ray period.
pub fn max_connections(period: u32, opts: SearchOptions) -> Result<SearchResult> {
    Ok(run_search(period, opts)?.0)
}

/// Census plus witness chains for the longer connections.
pub fn max_connections_with_chains(
    period: u32,
    opts: SearchOptions,
) -> Result<(SearchResult, Vec<ConnectionChain>)> {
    run_search(period, opts)
}

/// The named long connections recovered by the census.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedExample {
    /// Period 22, diameter 12.
    Price22,
    /// Period 32, diameter 14, found by the 1/2-satellite deep search.
    Satellite32,
}

/// Reconstruct one of the named long-connection examples with its quoted
/// bounding roots.
pub fn find_named_example(which: NamedExample) -> Result<ConnectionChain> {
    match which {
        NamedExample::Price22 => {
            let opts = SearchOptions { keep_chains_from: 12, ..Default::default() };
            let (_, chains) = max_connections_with_chains(22, opts)?;
            let mm = (1u128 << 22) - 1;
            let want = (Angle::new(882259, mm), Angle::new(882276, mm));
            chains
                .into_iter()
                .find(|c| {
                    c.length == 12
                        && ((c.q_root.lo(), c.q_root.hi()) == want
                            || (c.p_root.lo(), c.p_root.hi()) == want)
                })
                .ok_or_else(|| Error::Domain("period-22 diameter-12 chain not found".into()))
        }
        NamedExample::Satellite32 => {
            let ctx = Ctx::new(32)?;
            let mm = ctx.mm;
            let p_seed = (918089177u64, 918089186u64);
            let q_seed = (mm - 1998920776, mm - 1998920775);
            let opts = SearchOptions { keep_chains_from: 14, ..Default::default() };
            let mut search = Search::new(&ctx, opts);
            for seed in [p_seed, q_seed] {
                assert!(ctx.exact_period(seed.0));
                if ctx.is_satellite(seed) {
                    search.run_satellite_seed(seed);
                } else {
                    search.run_primitive_seed(seed);
                }
            }
            let (_, chains) = search.into_results(&ctx);
            let want_p = (Angle::new(918089177, u128::from(mm)), Angle::new(918089186, u128::from(mm)));
            chains
                .into_iter()
                .find(|c| c.length == 14 && (c.p_root.lo(), c.p_root.hi()) == want_p)
                .ok_or_else(|| Error::Domain("period-32 diameter-14 chain not found".into()))
        }
    }
}

/// Extend a chain by one pinching point on its growing side, as a public
/// single-step API over the same candidate rule the census uses.
pub fn extend_chain(ctx_period: u32, chain: &Chain) -> Result<ExtendOutcome> {
    let ctx = Ctx::new(ctx_period)?;
    let opts = SearchOptions::default();
    let search = Search::new(&ctx, opts);
    if chain.satellite {
        return Ok(ExtendOutcome::Maximal);
    }
    let side = chain.grow_side;
    let x = *chain.rays.last().unwrap();
    let mut next = Vec::new();
    for cand in search.candidates(chain, x, side) {
        if !search.nested_with_all(chain, side, cand.root) {
            continue;
        }
        if cand.satellite {
            let mut stopped = chain.clone();
            stopped.links.push((side, cand.root, cand.shift));
            match side {
                Side::P => stopped.p_roots.push(cand.root),
                Side::Q => stopped.q_roots.push(cand.root),
            }
            stopped.satellite = true;
            stopped.sat_link = Some((side, cand.root));
            return Ok(ExtendOutcome::SatelliteStop(stopped));
        }
        let mut c = chain.clone();
        c.push(side, &cand);
        next.push(c);
    }
    Ok(match next.len() {
        0 => ExtendOutcome::Maximal,
        1 => ExtendOutcome::Extended(next.pop().unwrap()),
        _ => ExtendOutcome::Branched(next),
    })
}

impl Chain {
    /// Fresh chain seeded at a root's characteristic point, growing through
    /// the given characteristic ray.
    pub fn seed(period: u32, root: &RootPair, via_hi: bool) -> Result<Chain> {
        let mm = (1u128 << period) - 1;
        let scale = |a: &Angle| (a.numerator() * mm / a.denominator()) as u64;
        let (lo, hi) = (scale(&root.lo()), scale(&root.hi()));
        let (free, grow) = if via_hi { (lo, hi) } else { (hi, lo) };
        Ok(Chain {
            period,
            rays: vec![free, grow],
            used: vec![free, grow],
            links: vec![(Side::P, (lo, hi), 0)],
            p_roots: vec![(lo, hi)],
            q_roots: vec![],
            grow_side: Side::Q,
            satellite: false,
            star_seeded: false,
            sat_link: None,
        })
    }

    pub fn ray_angles(&self) -> Vec<Angle> {
        let mm = (1u128 << self.period) - 1;
        self.rays.iter().map(|&x| Angle::new(u128::from(x), mm)).collect()
    }

    pub fn is_satellite_stopped(&self) -> bool {
        self.satellite
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(period: u32) -> BTreeMap<u32, (u64, u64)> {
        max_connections(period, SearchOptions::default()).unwrap().cells
    }

    #[test]
    fn tiny_periods_have_no_long_connections() {
        assert!(cells(2).is_empty());
        assert!(cells(3).is_empty());
        assert!(cells(5).is_empty());
    }

    #[test]
    fn length_six_appears_at_period_four() {
        let c = cells(4);
        assert_eq!(c.get(&6), Some(&(0, 2)));
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn length_five_appears_at_periods_seven_and_nine() {
        let c7 = cells(7);
        assert!(c7.get(&5).map(|&(p, _)| p > 0).unwrap_or(false), "{c7:?}");
        let c9 = cells(9);
        assert!(c9.get(&5).map(|&(p, _)| p > 0).unwrap_or(false), "{c9:?}");
        assert!(c9.get(&6).is_some(), "{c9:?}");
    }

    #[test]
    fn census_row_10() {
        let c = cells(10);
        assert_eq!(c.get(&5), Some(&(32, 0)), "{c:?}");
        assert_eq!(c.get(&6), Some(&(14, 88)), "{c:?}");
        assert_eq!(c.get(&8), Some(&(0, 2)), "{c:?}");
        assert_eq!(c.len(), 3, "{c:?}");
    }

    #[test]
    fn census_is_deterministic_across_jobs() {
        let one = max_connections(9, SearchOptions { jobs: 1, ..Default::default() }).unwrap();
        let four = max_connections(9, SearchOptions { jobs: 4, ..Default::default() }).unwrap();
        assert_eq!(one, four);
    }

#[test]
fn dump_period_10_sat6() {
    let opts = SearchOptions { keep_chains_from: 5, ..Default::default() };
    let (_, chains) = max_connections_with_chains(10, opts).unwrap();
    for c in &chains {
        if c.length == 6 && c.satellite {
            let mm = 1023u128;
            let s = |a: &crate::Angle| a.numerator() * mm / a.denominator();
            let p = (s(&c.p_root.lo()), s(&c.p_root.hi()));
            let q = (s(&c.q_root.lo()), s(&c.q_root.hi()));
            let pc = (mm - p.1, mm - p.0);
            let conj_limb = (pc.0 <= q.0 && q.1 <= pc.1) || (q.0 <= pc.0 && pc.1 <= q.1);
            println!("p={:?} q={:?} conjlimb={} rays={:?} links={}",
                p, q, conj_limb, c.rays.len(),
                c.links.iter().map(|l| format!("{:?}:{}/{}:sat={}", l.side, s(&l.root.lo()), s(&l.root.hi()), l.root.is_satellite())).collect::<Vec<_>>().join(","));
            let _ = pc;
        }
    }
    panic!("dump only");
}

#[test]
fn named_examples_probe() {
    let c = find_named_example(NamedExample::Price22).unwrap();
    let mm = (1u128 << 22) - 1;
    let s = |x: &crate::Angle| x.numerator() * (mm / x.denominator());
    println!("PRICE22 len={} sat={} p=({},{}) q=({},{})", c.length, c.satellite,
        s(&c.p_root.lo()), s(&c.p_root.hi()), s(&c.q_root.lo()), s(&c.q_root.hi()));
    let c = find_named_example(NamedExample::Satellite32).unwrap();
    let mm = (1u128 << 32) - 1;
    let s = |x: &crate::Angle| x.numerator() * (mm / x.denominator());
    println!("SAT32 len={} sat={} p=({},{}) q=({},{})", c.length, c.satellite,
        s(&c.p_root.lo()), s(&c.p_root.hi()), s(&c.q_root.lo()), s(&c.q_root.hi()));
    panic!("dump only");
}

#[test]
fn census_timing() {
    for n in [16u32, 18, 20] {
        let t0 = std::time::Instant::now();
        let r = max_connections(n, SearchOptions { jobs: 4, ..Default::default() }).unwrap();
        println!("TIMING period {} took {:?} cells {:?}", n, t0.elapsed(), r.cells);
    }
    panic!("dump only");
}

#[test]
fn ab_split_test() {
    for n in [10u32, 12] {
        let r = max_connections(n, SearchOptions::default()).unwrap();
        println!("ABTEST period {} -> {:?}", n, r.cells);
    }
    panic!("dump only");
}

#[test]
fn greedy_variants() {
    for n in [10u32, 12] {
        let r = max_connections(n, SearchOptions { greedy: true, ..Default::default() }).unwrap();
        println!("GREEDY period {} -> {:?}", n, r.cells);
    }
    panic!("dump only");
}

    #[test]
    fn basilica_seed_satellite_stop() {
        // the conjugate 1/2-limb star stops immediately with doubled length
        let ctx = Ctx::new(2).unwrap();
        let mut s = Search::new(&ctx, SearchOptions::default());
        s.run_satellite_seed((1, 2));
        // a bare star has diameter 2 and is not recorded
        assert!(s.found.is_empty());
    }
}
