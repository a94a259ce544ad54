//! Dynamic-plane landing patterns for a postcritically finite parameter.
//!
//! Two rational rays land together in the Julia set iff their angle pair is,
//! up to iterated pullback across the critical chords, a forward image of the
//! characteristic pair of a root at or before the parameter. The recursion
//! here implements exactly that: the periodic base case unions orbit pairs of
//! the relevant roots, the preperiodic step doubles the angles and checks the
//! pair is not separated by the critical chord system.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::angle::{Angle, CircularArc};
use crate::params::{roots_of_period, wake_angles, Limb, RootPair};
use crate::{Error, Result};

/// A postcritically finite parameter given combinatorially: the center of a
/// root, or a Misiurewicz point by a strictly preperiodic angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParameterSpec {
    Center(RootPair),
    Misiurewicz(Angle),
}

impl ParameterSpec {
    /// Center reached from one characteristic angle; the conjugate is computed.
    pub fn center_of_angle(a: &Angle) -> Result<ParameterSpec> {
        Ok(ParameterSpec::Center(RootPair::of_angle(a)?))
    }

    pub fn misiurewicz(a: &Angle) -> Result<ParameterSpec> {
        if a.preperiod_period().preperiod == 0 {
            return Err(Error::Domain(format!(
                "{a} is periodic; a Misiurewicz parameter needs preperiod >= 1"
            )));
        }
        Ok(ParameterSpec::Misiurewicz(*a))
    }

    pub fn airplane() -> ParameterSpec {
        ParameterSpec::center_of_angle(&Angle::new(3, 7)).unwrap()
    }

    pub fn basilica() -> ParameterSpec {
        ParameterSpec::center_of_angle(&Angle::new(1, 3)).unwrap()
    }

    pub fn rabbit() -> ParameterSpec {
        ParameterSpec::center_of_angle(&Angle::new(1, 7)).unwrap()
    }

    pub fn corabbit() -> ParameterSpec {
        ParameterSpec::center_of_angle(&Angle::new(5, 7)).unwrap()
    }

    pub fn kokopelli() -> ParameterSpec {
        ParameterSpec::center_of_angle(&Angle::new(3, 15)).unwrap()
    }

    /// The dendrite endpoint of the principal dyadic vein.
    pub fn quarter() -> ParameterSpec {
        ParameterSpec::misiurewicz(&Angle::new(1, 4)).unwrap()
    }

    /// A defining external angle of the critical value.
    pub fn critical_value_angle(&self) -> Angle {
        match self {
            ParameterSpec::Center(r) => r.lo(),
            ParameterSpec::Misiurewicz(a) => *a,
        }
    }

    /// The chords bounding the critical strip: preimages of the critical
    /// value's ray pair (center) or ray (Misiurewicz).
    pub fn critical_chords(&self) -> Vec<(Angle, Angle)> {
        match self {
            ParameterSpec::Center(r) => {
                let (lo0, lo1) = r.lo().halves();
                let (hi0, hi1) = r.hi().halves();
                vec![(lo0, hi1), (hi0, lo1)]
            }
            ParameterSpec::Misiurewicz(a) => {
                let (h0, h1) = a.halves();
                vec![(h0, h1)]
            }
        }
    }

    /// Position of the parameter in the angle circle, used for wake tests.
    fn parameter_angle(&self) -> Angle {
        self.critical_value_angle()
    }
}

impl fmt::Display for ParameterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParameterSpec::Center(r) => write!(f, "c:{}/{}", r.lo(), r.hi()),
            ParameterSpec::Misiurewicz(a) => write!(f, "m:{a}"),
        }
    }
}

/// One landing class: all angles whose rays land at a common point, plus the
/// preperiod and period of that point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LandingClass {
    pub angles: Vec<Angle>,
    pub point_preperiod: u32,
    pub point_period: u32,
}

/// Hubbard-tree angle exclusions for the supported catalog of parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenIntervals {
    pub parameter: ParameterSpec,
    pub arcs: Vec<CircularArc>,
}

/// Outcome of the one-sided bounded-connection test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds { boundary: bool, periodic_diameter_bound: u32, diameter_bound: u32 },
    Fails,
    OutOfCatalog,
}

// Region masks for the separation test. The critical chords cut the circle
// into four arcs for a center (two strip arcs flanking the critical gap and
// two outer sides) and two arcs for a Misiurewicz point. Angles on a chord
// carry the masks of the regions their landing point can touch.
const PART1: u8 = 1;
const PART2: u8 = 2;
const SIDE_A: u8 = 4;
const SIDE_B: u8 = 8;

/// Landing-pattern engine for one parameter. Queries are memoized; the engine
/// is safe to share behind its internal locks.
pub struct Landing {
    spec: ParameterSpec,
    partitions: Mutex<HashMap<u32, PeriodicPartition>>,
    classes: Mutex<HashMap<Angle, LandingClass>>,
}

#[derive(Clone, Default)]
struct PeriodicPartition {
    class_of: HashMap<Angle, u32>,
    classes: Vec<Vec<Angle>>,
}

impl Landing {
    pub fn new(spec: ParameterSpec) -> Landing {
        Landing {
            spec,
            partitions: Mutex::new(HashMap::new()),
            classes: Mutex::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> ParameterSpec {
        self.spec
    }

    /// Do the rays at angles `a` and `b` land at the same Julia set point?
    pub fn colands(&self, a: &Angle, b: &Angle) -> Result<bool> {
        if a == b {
            return Ok(true);
        }
        let (pa, pb) = (a.preperiod_period(), b.preperiod_period());
        if pa != pb {
            return Ok(false);
        }
        if pa.preperiod == 0 {
            let part = self.periodic_partition(pa.period)?;
            let (ca, cb) = (part.class_of.get(a), part.class_of.get(b));
            return Ok(match (ca, cb) {
                (Some(x), Some(y)) => x == y,
                _ => false,
            });
        }
        if self.separated(a, b) {
            return Ok(false);
        }
        self.colands(&a.double(), &b.double())
    }

    /// The maximal co-landing class containing `a`.
    pub fn landing_class(&self, a: &Angle) -> Result<LandingClass> {
        if let Some(c) = self.classes.lock().unwrap().get(a) {
            return Ok(c.clone());
        }
        let pp = a.preperiod_period();
        let class = if pp.preperiod == 0 {
            let part = self.periodic_partition(pp.period)?;
            let angles = match part.class_of.get(a) {
                Some(&id) => part.classes[id as usize].clone(),
                None => vec![*a],
            };
            let point_period = set_period(&angles);
            LandingClass { angles, point_preperiod: 0, point_period }
        } else {
            let parent = self.landing_class(&a.double())?;
            let mut halves: Vec<Angle> = Vec::with_capacity(2 * parent.angles.len());
            for x in &parent.angles {
                let (h0, h1) = x.halves();
                halves.push(h0);
                halves.push(h1);
            }
            // group the preimage angles by non-separation; wildcard angles on
            // a critical chord join both sides
            let mut uf: Vec<usize> = (0..halves.len()).collect();
            fn find(uf: &mut Vec<usize>, i: usize) -> usize {
                if uf[i] != i {
                    let r = find(uf, uf[i]);
                    uf[i] = r;
                }
                uf[i]
            }
            for i in 0..halves.len() {
                for j in i + 1..halves.len() {
                    if !self.separated(&halves[i], &halves[j]) {
                        let (ri, rj) = (find(&mut uf, i), find(&mut uf, j));
                        uf[rj] = ri;
                    }
                }
            }
            let me = halves.iter().position(|x| x == a).expect("half of parent class");
            let root = find(&mut uf, me);
            let mut angles: Vec<Angle> = (0..halves.len())
                .filter(|&i| find(&mut uf, i) == root)
                .map(|i| halves[i])
                .collect();
            angles.sort();
            angles.dedup();
            LandingClass {
                angles,
                point_preperiod: pp.preperiod,
                point_period: parent.point_period,
            }
        };
        self.classes.lock().unwrap().insert(*a, class.clone());
        Ok(class)
    }

    /// Region mask of an angle relative to the critical chord system.
    ///
    /// Center chords pair `lo/2` with `(hi+1)/2` and `hi/2` with `(lo+1)/2`;
    /// each chord's endpoints land at one preimage of the characteristic
    /// point, touching the outer side beyond that chord. Two angles can only
    /// co-land if their masks intersect.
    fn region_mask(&self, x: &Angle) -> u8 {
        match &self.spec {
            ParameterSpec::Misiurewicz(t) => {
                let (b0, b1) = t.halves();
                if *x == b0 || *x == b1 {
                    // rays landing at the critical point touch both sides
                    SIDE_A | SIDE_B
                } else if x.in_open_arc(&b0, &b1) {
                    SIDE_A
                } else {
                    SIDE_B
                }
            }
            ParameterSpec::Center(r) => {
                // circle order: lo/2 < hi/2 < (lo+1)/2 < (hi+1)/2
                let (lo0, lo1) = r.lo().halves();
                let (hi0, hi1) = r.hi().halves();
                if *x == lo0 || *x == hi1 {
                    SIDE_B
                } else if *x == hi0 || *x == lo1 {
                    SIDE_A
                } else if x.in_open_arc(&lo0, &hi0) {
                    PART1
                } else if x.in_open_arc(&lo1, &hi1) {
                    PART2
                } else if x.in_open_arc(&hi0, &lo1) {
                    SIDE_A
                } else {
                    SIDE_B
                }
            }
        }
    }

    fn separated(&self, a: &Angle, b: &Angle) -> bool {
        if a.preperiod_period() != b.preperiod_period() {
            return true;
        }
        self.region_mask(a) & self.region_mask(b) == 0
    }

    fn periodic_partition(&self, period: u32) -> Result<PeriodicPartition> {
        if let Some(p) = self.partitions.lock().unwrap().get(&period) {
            return Ok(p.clone());
        }
        let roots = self.relevant_roots(period)?;
        let mut ids: HashMap<Angle, usize> = HashMap::new();
        let mut uf: Vec<usize> = Vec::new();
        fn find(uf: &mut Vec<usize>, i: usize) -> usize {
            if uf[i] != i {
                let r = find(uf, uf[i]);
                uf[i] = r;
            }
            uf[i]
        }
        let id_of = |a: Angle, uf: &mut Vec<usize>, ids: &mut HashMap<Angle, usize>| {
            *ids.entry(a).or_insert_with(|| {
                uf.push(uf.len());
                uf.len() - 1
            })
        };
        for root in &roots {
            let (mut x, mut y) = (root.lo(), root.hi());
            for _ in 0..period {
                let (ix, iy) = (id_of(x, &mut uf, &mut ids), id_of(y, &mut uf, &mut ids));
                let (rx, ry) = (find(&mut uf, ix), find(&mut uf, iy));
                if rx != ry {
                    uf[ry] = rx;
                }
                x = x.double();
                y = y.double();
            }
        }
        let mut part = PeriodicPartition::default();
        let mut class_index: HashMap<usize, u32> = HashMap::new();
        let mut angles: Vec<Angle> = ids.keys().copied().collect();
        angles.sort();
        for a in angles {
            let r = find(&mut uf, ids[&a]);
            let id = *class_index.entry(r).or_insert_with(|| {
                part.classes.push(Vec::new());
                (part.classes.len() - 1) as u32
            });
            part.classes[id as usize].push(a);
            part.class_of.insert(a, id);
        }
        self.partitions.lock().unwrap().insert(period, part.clone());
        Ok(part)
    }

    /// Roots whose orbit portraits are realized in this Julia set: those with
    /// the parameter strictly inside the wake, plus the parameter's own root.
    fn relevant_roots(&self, period: u32) -> Result<Vec<RootPair>> {
        let here = self.spec.parameter_angle();
        let mut out = Vec::new();
        for root in roots_of_period(period)? {
            let own = matches!(&self.spec, ParameterSpec::Center(r) if *r == root);
            if own || root.wake_contains(&here) {
                out.push(root);
            }
        }
        Ok(out)
    }
}

/// Least `t >= 1` with `2^t * S = S` as a set.
fn set_period(angles: &[Angle]) -> u32 {
    if angles.is_empty() {
        return 1;
    }
    let period = angles[0].preperiod_period().period;
    let set: std::collections::BTreeSet<Angle> = angles.iter().copied().collect();
    for t in 1..=period {
        let image: std::collections::BTreeSet<Angle> =
            set.iter().map(|x| x.double_n(t)).collect();
        if image == set {
            return t;
        }
    }
    period
}

/// Free-standing convenience wrapper around [`Landing::colands`].
pub fn colands(spec: ParameterSpec, a: &Angle, b: &Angle) -> Result<bool> {
    Landing::new(spec).colands(a, b)
}

/// The catalog of primary forbidden arcs for the mirrored Hubbard tree.
///
/// Supported parameters: real parameters at or before the Airplane, and
/// parameters centered on the veins to the Misiurewicz endpoints 1/6 and 1/4.
/// Everything else is an explicit catalog miss.
pub fn forbidden_intervals(spec: ParameterSpec) -> Result<ForbiddenIntervals> {
    let mut arcs = Vec::new();
    let sixth = Angle::new(1, 6);
    let quarter = Angle::new(1, 4);
    let airplane_lo = Angle::new(3, 7);
    match &spec {
        ParameterSpec::Center(r) => {
            if r.hi() == r.lo().minus() && r.lo() <= airplane_lo {
                arcs.push(CircularArc::open(Angle::new(6, 7), Angle::new(1, 7)));
            }
            if r.wake_contains(&sixth) {
                arcs.push(CircularArc::open(Angle::new(13, 14), Angle::new(3, 14)));
            }
            if r.wake_contains(&quarter) {
                arcs.push(CircularArc::open(Angle::new(3, 14), Angle::new(5, 14)));
            }
        }
        ParameterSpec::Misiurewicz(t) => {
            let tm = if *t <= t.minus() { *t } else { t.minus() };
            if tm <= airplane_lo && colands(spec, t, &t.minus())? {
                arcs.push(CircularArc::open(Angle::new(6, 7), Angle::new(1, 7)));
            }
            if *t == sixth {
                arcs.push(CircularArc::open(Angle::new(13, 14), Angle::new(3, 14)));
            }
            if *t == quarter {
                arcs.push(CircularArc::open(Angle::new(3, 14), Angle::new(5, 14)));
            }
        }
    }
    if arcs.is_empty() {
        return Err(Error::CatalogMiss(format!(
            "no Hubbard-tree interval data for {spec}; supported: real parameters \
             at/before the Airplane, veins to 1/6 and 1/4"
        )));
    }
    Ok(ForbiddenIntervals { parameter: spec, arcs })
}

/// Test whether one side of the spine of a polynomial from `p_limb` has all
/// its external angles inside a forbidden interval of `q`'s tree data.
///
/// The upper side carries angles `[0, hi/2]`, the lower side
/// `[(lo+1)/2, 1]`; a wrap-around forbidden arc must absorb one of them.
pub fn bounded_connection_check(p_limb: Limb, q: ParameterSpec) -> Result<Verdict> {
    let f = match forbidden_intervals(q) {
        Ok(f) => f,
        Err(Error::CatalogMiss(_)) => return Ok(Verdict::OutOfCatalog),
        Err(e) => return Err(e),
    };
    let wake = wake_angles(p_limb);
    let upper_end = Angle::new(wake.hi().numerator(), 2 * wake.hi().denominator());
    let lower_start = Angle::new(
        wake.lo().numerator() + wake.lo().denominator(),
        2 * wake.lo().denominator(),
    );

    // the given arcs plus their immediate preimage arcs
    let mut arcs = f.arcs.clone();
    for arc in &f.arcs {
        let (f0, t0) = (arc.from, arc.to);
        let a1 = CircularArc::open(
            Angle::new(f0.numerator(), 2 * f0.denominator()),
            Angle::new(t0.numerator(), 2 * t0.denominator()),
        );
        // length of the arc halves; the second component is the antipode
        let half_len_to = if t0 > f0 {
            a1.to
        } else {
            Angle::new(t0.numerator() + t0.denominator(), 2 * t0.denominator())
        };
        let comp1 = CircularArc::open(a1.from, half_len_to);
        let comp2 = CircularArc::open(comp1.from.opposite(), comp1.to.opposite());
        arcs.push(comp1);
        arcs.push(comp2);
    }

    let mut boundary_hit = false;
    for arc in &arcs {
        if arc.from <= arc.to {
            continue; // only wrap-around arcs can absorb a side through 0
        }
        // upper side [0, hi/2] fits iff hi/2 < arc.to
        if upper_end < arc.to || lower_start > arc.from {
            return Ok(Verdict::Holds {
                boundary: false,
                periodic_diameter_bound: 4,
                diameter_bound: 8,
            });
        }
        if upper_end == arc.to || lower_start == arc.from {
            boundary_hit = true;
        }
    }
    if boundary_hit {
        Ok(Verdict::Holds { boundary: true, periodic_diameter_bound: 4, diameter_bound: 8 })
    } else {
        Ok(Verdict::Fails)
    }
}
