//! Ray-equivalence classes of a formal mating.
//!
//! The formal mating glues the two filled Julia sets along complex conjugate
//! angles: the ray labeled `t` joins the landing point of `t` on the `p` side
//! to the landing point of `-t` on the `q` side. Connected components of this
//! bipartite incidence structure are the ray-equivalence classes; collapsing
//! them defines the topological mating, so their shape (trees vs cycles) and
//! diameter carry all the combinatorial content.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::angle::Angle;
use crate::landing::{Landing, ParameterSpec};
use crate::{Error, Result};

/// A formal mating of two postcritically finite parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatingSpec {
    pub p: ParameterSpec,
    pub q: ParameterSpec,
}

/// Finite truncation of the circle: all angles with preperiod at most
/// `max_preperiod` and period at most `max_period`. The set is forward
/// invariant under doubling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleUniverse {
    pub max_preperiod: u32,
    pub max_period: u32,
}

impl AngleUniverse {
    pub fn new(max_preperiod: u32, max_period: u32) -> AngleUniverse {
        AngleUniverse { max_preperiod, max_period }
    }

    pub fn contains(&self, a: &Angle) -> bool {
        let pp = a.preperiod_period();
        pp.preperiod <= self.max_preperiod && pp.period <= self.max_period
    }

    /// Every angle of the universe, sorted. Errors out instead of exhausting
    /// memory on oversized requests.
    pub fn angles(&self) -> Result<Vec<Angle>> {
        let weight = (self.max_preperiod as u64 + 1).saturating_mul(1 << self.max_period.min(40))
            * 2u64.saturating_pow(self.max_preperiod.min(40));
        if self.max_period > 22 || self.max_preperiod > 24 || weight > (1 << 26) {
            return Err(Error::Resource(format!(
                "universe (preperiod <= {}, period <= {}) too large to enumerate",
                self.max_preperiod, self.max_period
            )));
        }
        let mut set = BTreeSet::new();
        for k in 1..=self.max_period {
            let odd = (1u128 << k) - 1;
            for l in 0..=self.max_preperiod {
                let den = (1u128 << l) * odd;
                for num in 0..den {
                    set.insert(Angle::new(num, den));
                }
            }
        }
        Ok(set.into_iter().collect())
    }
}

/// Tree or cycle-bearing shape of a ray-equivalence class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassShape {
    Tree,
    CycleBearing,
}

/// One ray-equivalence class. Nodes are listed by the ray labels incident to
/// them, so a `q`-side node holds the mating labels `t` with `-t` landing at
/// the common point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayClass {
    pub rays: Vec<Angle>,
    pub p_nodes: Vec<Vec<Angle>>,
    pub q_nodes: Vec<Vec<Angle>>,
    pub shape: ClassShape,
    /// Number of rays on a longest geodesic of the class.
    pub diameter: u32,
}

impl RayClass {
    pub fn contains(&self, a: &Angle) -> bool {
        self.rays.binary_search(a).is_ok()
    }

    /// Independent cycles of the incidence graph (0 for trees).
    pub fn cycle_rank(&self) -> usize {
        self.rays.len() + 1 - self.p_nodes.len() - self.q_nodes.len()
    }
}

/// Arc-versus-star report for a periodic tree class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PeriodicShape {
    Arc { ray_period: u32 },
    Star { ray_period: u32, branches: u32, center_rays: Vec<Angle>, point_period: u32 },
}

/// Result of the critical-value connection search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionPath {
    pub rays: Vec<Angle>,
    /// True when the q-side endpoint is the critical point rather than the
    /// critical value (the direct collision making the mating's critical
    /// orbits meet).
    pub through_critical_point: bool,
}

impl ConnectionPath {
    pub fn length(&self) -> usize {
        self.rays.len()
    }
}

/// Engine for one formal mating: landing engines on both sides plus the
/// class machinery.
pub struct Mating {
    spec: MatingSpec,
    p: Landing,
    q: Landing,
}

impl Mating {
    pub fn new(spec: MatingSpec) -> Mating {
        Mating { spec, p: Landing::new(spec.p), q: Landing::new(spec.q) }
    }

    pub fn spec(&self) -> MatingSpec {
        self.spec
    }

    pub fn p_engine(&self) -> &Landing {
        &self.p
    }

    pub fn q_engine(&self) -> &Landing {
        &self.q
    }

    /// Ray labels landing together with `t` on the `p` side.
    fn p_partners(&self, t: &Angle) -> Result<Vec<Angle>> {
        Ok(self.p.landing_class(t)?.angles)
    }

    /// Ray labels landing together with `t` on the `q` side.
    fn q_partners(&self, t: &Angle) -> Result<Vec<Angle>> {
        Ok(self.q.landing_class(&t.minus())?.angles.iter().map(|x| x.minus()).collect())
    }

    /// The ray-equivalence class of `a`, grown by closure inside `u`.
    pub fn class_of(&self, a: &Angle, u: &AngleUniverse) -> Result<RayClass> {
        if !u.contains(a) {
            return Err(Error::Domain(format!("angle {a} outside the universe")));
        }
        let mut rays: BTreeSet<Angle> = BTreeSet::new();
        let mut queue = VecDeque::new();
        rays.insert(*a);
        queue.push_back(*a);
        while let Some(t) = queue.pop_front() {
            for next in self.p_partners(&t)?.into_iter().chain(self.q_partners(&t)?) {
                debug_assert!(u.contains(&next), "class escaped the universe");
                if rays.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        self.assemble_class(rays.into_iter().collect())
    }

    fn assemble_class(&self, rays: Vec<Angle>) -> Result<RayClass> {
        let mut p_nodes: BTreeMap<Angle, Vec<Angle>> = BTreeMap::new();
        let mut q_nodes: BTreeMap<Angle, Vec<Angle>> = BTreeMap::new();
        let mut p_of: HashMap<Angle, Angle> = HashMap::new();
        let mut q_of: HashMap<Angle, Angle> = HashMap::new();
        for t in &rays {
            let ps = self.p_partners(t)?;
            let key = ps[0];
            p_of.insert(*t, key);
            p_nodes.entry(key).or_insert(ps);
            let qs = self.q_partners(t)?;
            let qkey = *qs.iter().min().unwrap();
            q_of.insert(*t, qkey);
            q_nodes.entry(qkey).or_insert_with(|| {
                let mut v = qs.clone();
                v.sort();
                v
            });
        }
        // breadth-first diameter over the bipartite node graph; nodes are
        // indexed p first then q
        let p_keys: Vec<Angle> = p_nodes.keys().copied().collect();
        let q_keys: Vec<Angle> = q_nodes.keys().copied().collect();
        let pi: HashMap<Angle, usize> =
            p_keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let qi: HashMap<Angle, usize> =
            q_keys.iter().enumerate().map(|(i, k)| (*k, i + p_keys.len())).collect();
        let n = p_keys.len() + q_keys.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for t in &rays {
            let a = pi[&p_of[t]];
            let b = qi[&q_of[t]];
            adj[a].push(b);
            adj[b].push(a);
        }
        let bfs = |start: usize| -> Vec<u32> {
            let mut dist = vec![u32::MAX; n];
            let mut dq = VecDeque::new();
            dist[start] = 0;
            dq.push_back(start);
            while let Some(v) = dq.pop_front() {
                for &w in &adj[v] {
                    if dist[w] == u32::MAX {
                        dist[w] = dist[v] + 1;
                        dq.push_back(w);
                    }
                }
            }
            dist
        };
        let mut diameter = 0;
        if n > 0 {
            if rays.len() + 1 == n {
                // tree: double sweep
                let d0 = bfs(0);
                let far = (0..n).max_by_key(|&i| d0[i]).unwrap();
                let d1 = bfs(far);
                diameter = (0..n).map(|i| d1[i]).max().unwrap();
            } else {
                for s in 0..n {
                    let d = bfs(s);
                    diameter = diameter.max((0..n).filter(|&i| d[i] < u32::MAX).map(|i| d[i]).max().unwrap());
                }
            }
        }
        let shape = if rays.len() + 1 == n { ClassShape::Tree } else { ClassShape::CycleBearing };
        Ok(RayClass {
            rays,
            p_nodes: p_nodes.into_values().collect(),
            q_nodes: q_nodes.into_values().collect(),
            shape,
            diameter,
        })
    }

    /// All ray-equivalence classes over the universe.
    pub fn build_classes(&self, u: &AngleUniverse) -> Result<Vec<RayClass>> {
        let all = u.angles()?;
        let mut seen: BTreeSet<Angle> = BTreeSet::new();
        let mut out = Vec::new();
        for a in all {
            if seen.contains(&a) {
                continue;
            }
            let class = self.class_of(&a, u)?;
            for t in &class.rays {
                seen.insert(*t);
            }
            out.push(class);
        }
        Ok(out)
    }

    /// Arc-versus-star analysis of a periodic tree class.
    pub fn periodic_class_shape(&self, class: &RayClass) -> Result<PeriodicShape> {
        if class.shape != ClassShape::Tree {
            return Err(Error::Domain("shape analysis needs a finite tree class".into()));
        }
        let mut period = None;
        for t in &class.rays {
            let pp = t.preperiod_period();
            if pp.preperiod != 0 {
                return Err(Error::Domain(format!("class contains the preperiodic ray {t}")));
            }
            match period {
                None => period = Some(pp.period),
                Some(m) => {
                    if m != pp.period {
                        return Err(Error::Domain("mixed ray periods in one class".into()));
                    }
                }
            }
        }
        let m = period.ok_or_else(|| Error::Domain("empty class".into()))?;
        let star = class
            .p_nodes
            .iter()
            .chain(class.q_nodes.iter())
            .find(|node| node.len() >= 3);
        Ok(match star {
            None => PeriodicShape::Arc { ray_period: m },
            Some(node) => PeriodicShape::Star {
                ray_period: m,
                branches: node.len() as u32,
                center_rays: node.clone(),
                point_period: m / node.len() as u32,
            },
        })
    }

    /// Shortest ray path joining the critical value of `P` to the critical
    /// value of `Q`, accepting the direct hit on `Q`'s critical point (the
    /// collision that makes the mating's critical orbits meet).
    pub fn connection_between_critical_values(
        &self,
        u: &AngleUniverse,
    ) -> Result<Option<ConnectionPath>> {
        let start = self.p.landing_class(&self.spec.p.critical_value_angle())?.angles;
        let q_cv = self.q.landing_class(&self.spec.q.critical_value_angle())?.angles;
        let q_cp = match &self.spec.q {
            ParameterSpec::Misiurewicz(t) => {
                Some(self.q.landing_class(&t.halves().0)?.angles)
            }
            ParameterSpec::Center(_) => None,
        };

        // breadth-first search over nodes, alternating sides; nodes are keyed
        // by their sorted angle set in the own-side coordinates
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        enum Key {
            P(Vec<Angle>),
            Q(Vec<Angle>),
        }
        let mut prev: HashMap<Key, (Key, Angle)> = HashMap::new();
        let mut queue = VecDeque::new();
        let start_key = Key::P(start.clone());
        queue.push_back(start_key.clone());
        let mut seen: BTreeSet<Key> = BTreeSet::new();
        seen.insert(start_key.clone());
        let mut hit: Option<(Key, bool)> = None;
        'bfs: while let Some(key) = queue.pop_front() {
            let rays: Vec<Angle> = match &key {
                Key::P(angles) => angles.clone(),
                Key::Q(angles) => angles.iter().map(|x| x.minus()).collect(),
            };
            for t in rays {
                if !u.contains(&t) {
                    continue;
                }
                let next_key = match &key {
                    Key::P(_) => Key::Q(self.q.landing_class(&t.minus())?.angles),
                    Key::Q(_) => Key::P(self.p.landing_class(&t)?.angles),
                };
                if seen.contains(&next_key) {
                    continue;
                }
                seen.insert(next_key.clone());
                prev.insert(next_key.clone(), (key.clone(), t));
                if let Key::Q(angles) = &next_key {
                    if *angles == q_cv {
                        hit = Some((next_key, false));
                        break 'bfs;
                    }
                    if q_cp.as_deref() == Some(angles.as_slice()) {
                        hit = Some((next_key, true));
                        break 'bfs;
                    }
                }
                queue.push_back(next_key);
            }
        }
        let Some((mut key, through_cp)) = hit else {
            return Ok(None);
        };
        let mut rays = Vec::new();
        while let Some((parent, ray)) = prev.get(&key) {
            rays.push(*ray);
            key = parent.clone();
            if key == start_key {
                break;
            }
        }
        rays.reverse();
        Ok(Some(ConnectionPath { rays, through_critical_point: through_cp }))
    }

    /// Iterated preimages of a closed ray connection, one entry per return
    /// period of `p`'s critical orbit. Ray counts double at each entry.
    ///
    /// `around` must be a characteristic angle of `p`'s root; it selects the
    /// branch of the pullback that stays nested around the critical value.
    pub fn pullback_connection(
        &self,
        rays: &[Angle],
        steps: u32,
        around: &Angle,
    ) -> Result<Vec<Vec<Angle>>> {
        let root = match &self.spec.p {
            ParameterSpec::Center(r) => *r,
            ParameterSpec::Misiurewicz(_) => {
                return Err(Error::Domain(
                    "pullback tower is defined over a center parameter on the p side".into(),
                ))
            }
        };
        if *around != root.lo() && *around != root.hi() {
            return Err(Error::Domain(format!(
                "around={around} is not a characteristic angle of the p root"
            )));
        }
        let m = root.ray_period();
        let mut current: Vec<Angle> = rays.to_vec();
        current.sort();
        let mut out = Vec::new();
        for _ in 0..steps {
            for dyn_step in 0..m {
                let target = if dyn_step == 0 {
                    None // the doubling step through the critical value
                } else {
                    // backward along the critical orbit: v_{m-1}, ..., v_1
                    Some(root.lo().double_n(m - 1 - dyn_step))
                };
                current = self.pullback_once(&current, target)?;
            }
            out.push(current.clone());
        }
        Ok(out)
    }

    // One dynamical pullback of a closed connection, selecting the component
    // enclosing the landing point of `target` when the preimage splits.
    fn pullback_once(&self, rays: &[Angle], target: Option<Angle>) -> Result<Vec<Angle>> {
        let mut halves: Vec<Angle> = Vec::with_capacity(rays.len() * 2);
        for t in rays {
            let (h0, h1) = t.halves();
            halves.push(h0);
            halves.push(h1);
        }
        halves.sort();
        // components of the preimage connection via shared landing nodes
        let mut uf: Vec<usize> = (0..halves.len()).collect();
        fn find(uf: &mut Vec<usize>, i: usize) -> usize {
            if uf[i] != i {
                let r = find(uf, uf[i]);
                uf[i] = r;
            }
            uf[i]
        }
        let mut by_node: HashMap<(bool, Vec<Angle>), usize> = HashMap::new();
        for (i, h) in halves.iter().enumerate() {
            for side_p in [true, false] {
                let node = if side_p {
                    self.p.landing_class(h)?.angles
                } else {
                    self.q.landing_class(&h.minus())?.angles
                };
                match by_node.entry((side_p, node)) {
                    std::collections::hash_map::Entry::Occupied(e) => {
                        let (ri, rj) = (find(&mut uf, i), find(&mut uf, *e.get()));
                        if ri != rj {
                            uf[ri] = rj;
                        }
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(i);
                    }
                }
            }
        }
        let mut components: BTreeMap<usize, Vec<Angle>> = BTreeMap::new();
        for i in 0..halves.len() {
            let r = find(&mut uf, i);
            components.entry(r).or_default().push(halves[i]);
        }
        let mut comps: Vec<Vec<Angle>> = components.into_values().collect();
        if comps.len() == 1 {
            return Ok(comps.pop().unwrap());
        }
        let Some(target) = target else {
            return Err(Error::AmbiguousBranch(format!(
                "preimage split into {} components at a doubling step",
                comps.len()
            )));
        };
        if comps.len() != 2 {
            return Err(Error::AmbiguousBranch(format!(
                "preimage split into {} components, expected 2",
                comps.len()
            )));
        }
        // a component encloses the target landing point iff the arc from the
        // target angle to a ray of the other component crosses it oddly
        let encl = |comp: &[Angle], anchor: &Angle| -> bool {
            let crossings = comp
                .iter()
                .filter(|x| x.in_open_arc(&target, anchor))
                .count();
            crossings % 2 == 1
        };
        let first_enclosed = encl(&comps[0], &comps[1][0]);
        let second_enclosed = encl(&comps[1], &comps[0][0]);
        match (first_enclosed, second_enclosed) {
            (true, false) => Ok(comps.swap_remove(0)),
            (false, true) => Ok(comps.swap_remove(1)),
            _ => Err(Error::AmbiguousBranch(format!(
                "target {target} not separated by the candidate branches {:?} / {:?}",
                comps[0], comps[1]
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn mis(s: &str) -> ParameterSpec {
        ParameterSpec::misiurewicz(&a(s)).unwrap()
    }

    #[test]
    fn universe_enumeration() {
        let u = AngleUniverse::new(1, 2);
        let all = u.angles().unwrap();
        // dens dividing 2*(2^2-1): 0, 1/3, 2/3, 1/6, 5/6, 1/2, 0 over den 2...
        assert!(all.contains(&Angle::ZERO));
        assert!(all.contains(&a("1/3")));
        assert!(all.contains(&a("1/6")));
        assert!(all.contains(&a("1/2")));
        for x in &all {
            assert!(u.contains(x));
            assert!(u.contains(&x.double()), "not forward invariant at {x}");
        }
    }

    #[test]
    fn beta_ray_class_is_trivial() {
        let m = Mating::new(MatingSpec { p: ParameterSpec::airplane(), q: mis("1/4") });
        let c = m.class_of(&Angle::ZERO, &AngleUniverse::new(2, 4)).unwrap();
        assert_eq!(c.rays, vec![Angle::ZERO]);
        assert_eq!(c.shape, ClassShape::Tree);
        assert_eq!(c.diameter, 1);
    }

    #[test]
    fn airplane_basilica_cycle() {
        let m = Mating::new(MatingSpec {
            p: ParameterSpec::airplane(),
            q: ParameterSpec::basilica(),
        });
        let u = AngleUniverse::new(4, 4);
        let c = m.class_of(&a("5/12"), &u).unwrap();
        assert_eq!(c.rays, vec![a("5/12"), a("7/12")]);
        assert_eq!(c.shape, ClassShape::CycleBearing);
        assert_eq!(c.p_nodes.len(), 1);
        assert_eq!(c.q_nodes.len(), 1);
        assert!(m.periodic_class_shape(&c).is_err());
    }

    #[test]
    fn rabbit_corabbit_alpha_class_is_cyclic() {
        let m = Mating::new(MatingSpec {
            p: ParameterSpec::rabbit(),
            q: ParameterSpec::corabbit(),
        });
        let u = AngleUniverse::new(0, 3);
        let c = m.class_of(&a("1/7"), &u).unwrap();
        assert_eq!(c.rays, vec![a("1/7"), a("2/7"), a("4/7")]);
        assert_eq!(c.shape, ClassShape::CycleBearing);
        assert_eq!(c.cycle_rank(), 2);
    }

    #[test]
    fn chebyshev_star_class() {
        // the worked mating 11/31 with 19/62: the class of the fixed point
        // joins the five rotation-cycle rays of q to a 5-cycle of p
        let m = Mating::new(MatingSpec {
            p: ParameterSpec::center_of_angle(&a("11/31")).unwrap(),
            q: mis("19/62"),
        });
        let u = AngleUniverse::new(1, 5);
        // mating label t lands at alpha_q on the q side iff -t is in the
        // rotation cycle; 1 - 9/31 = 22/31
        let c = m.class_of(&a("22/31"), &u).unwrap();
        assert_eq!(c.shape, ClassShape::Tree);
        assert_eq!(c.rays.len(), 10);
        // one q-side node is the dividing fixed point with five rays; the
        // other five are endpoints of K_q
        assert_eq!(c.q_nodes.len(), 6);
        assert_eq!(c.q_nodes.iter().filter(|n| n.len() == 5).count(), 1);
        assert_eq!(c.p_nodes.len(), 5);
        assert!(c.p_nodes.iter().all(|n| n.len() == 2));
        assert_eq!(c.diameter, 4);
        match m.periodic_class_shape(&c).unwrap() {
            PeriodicShape::Star { branches, point_period, ray_period, .. } => {
                assert_eq!(branches, 5);
                assert_eq!(ray_period, 5);
                assert_eq!(point_period, 1);
            }
            s => panic!("expected a star, got {s:?}"),
        }
    }

    #[test]
    fn critical_value_connections() {
        // direct collision for the bitransitive discontinuity family
        let m = Mating::new(MatingSpec { p: mis("3/16"), q: mis("5/8") });
        let path = m
            .connection_between_critical_values(&AngleUniverse::new(6, 2))
            .unwrap()
            .expect("direct connection");
        assert_eq!(path.length(), 1);
        assert!(path.through_critical_point);
        assert_eq!(path.rays, vec![a("3/16")]);

        // self-mating of the quarter endpoint has none
        let m = Mating::new(MatingSpec { p: mis("1/4"), q: mis("1/4") });
        assert!(m
            .connection_between_critical_values(&AngleUniverse::new(6, 4))
            .unwrap()
            .is_none());

        // conjugate-limb rabbits connect through the fixed-point class
        let m = Mating::new(MatingSpec {
            p: ParameterSpec::rabbit(),
            q: ParameterSpec::corabbit(),
        });
        let path = m
            .connection_between_critical_values(&AngleUniverse::new(2, 3))
            .unwrap()
            .expect("alpha connection");
        assert_eq!(path.length(), 1);
        assert!(!path.through_critical_point);
    }

    #[test]
    fn airplane_basilica_pullback_counts() {
        let m = Mating::new(MatingSpec {
            p: ParameterSpec::airplane(),
            q: ParameterSpec::basilica(),
        });
        let c0 = vec![a("5/12"), a("7/12")];
        let tower = m.pullback_connection(&c0, 3, &a("3/7")).unwrap();
        assert_eq!(tower[0].len(), 4);
        assert_eq!(tower[1].len(), 8);
        assert_eq!(tower[2].len(), 16);
        // first pullback returns the four rays around the critical value
        assert_eq!(tower[0], vec![a("41/96"), a("43/96"), a("53/96"), a("55/96")]);
    }
}
