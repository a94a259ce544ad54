//! Named verification scenarios: each one checks a concrete combinatorial
//! statement end to end and reports pass/fail with a witness.

use serde::Serialize;
use std::collections::BTreeSet;
use std::time::Instant;

use mating_core::graph::{ClassShape, Mating};
use mating_core::landing::{bounded_connection_check, Landing, Verdict};
use mating_core::miner::{find_named_example, max_connections, NamedExample, SearchOptions};
use mating_core::params::{
    alpha_cycle, douady_forbidden_arc, douady_magic, minus_alpha_angles, wake_angles, Limb,
};
use mating_core::{Angle, AngleUniverse, Error, MatingSpec, ParameterSpec};

#[derive(Clone, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub pass: bool,
    pub witness: serde_json::Value,
    pub millis: u128,
}

pub const SCENARIOS: &[&str] = &[
    "milnor-quarter",
    "kokopelli-airplane",
    "airplane-basilica",
    "length-six",
    "table1",
    "price22",
    "satellite32",
    "douady-magic",
    "chebyshev-shared",
    "shared-precapture",
    "airplane-multiplicity",
    "discontinuity",
];

pub fn run(name: &str, extended: bool, jobs: usize) -> Result<Vec<RunReport>, Error> {
    if name == "all" {
        return SCENARIOS.iter().map(|s| run_one(s, extended, jobs)).collect();
    }
    Ok(vec![run_one(name, extended, jobs)?])
}

fn run_one(name: &str, extended: bool, jobs: usize) -> Result<RunReport, Error> {
    if !SCENARIOS.contains(&name) {
        return Err(Error::Domain(format!(
            "unknown scenario {name:?}; registered: {}",
            SCENARIOS.join(", ")
        )));
    }
    let start = Instant::now();
    let (pass, witness) = match name {
        "milnor-quarter" => milnor_quarter(),
        "kokopelli-airplane" => kokopelli_airplane(),
        "airplane-basilica" => airplane_basilica(),
        "length-six" => length_six(),
        "table1" => table1(extended, jobs),
        "price22" => price22(),
        "satellite32" => satellite32(),
        "douady-magic" => douady_magic_scenario(),
        "chebyshev-shared" => chebyshev_shared(),
        "shared-precapture" => shared_precapture(),
        "airplane-multiplicity" => airplane_multiplicity(),
        "discontinuity" => discontinuity(),
        _ => unreachable!(),
    }?;
    Ok(RunReport {
        scenario: name.into(),
        pass,
        witness,
        millis: start.elapsed().as_millis(),
    })
}

type Outcome = Result<(bool, serde_json::Value), Error>;

fn a(s: &str) -> Angle {
    s.parse().expect("literal angle")
}

/// Angles whose full forward orbit avoids the given open arc: the angle set
/// of a spanning tree cut out by the complementary sector.
fn tree_angles(universe: &[Angle], arc: &mating_core::CircularArc) -> BTreeSet<Angle> {
    universe.iter().filter(|t| t.orbit_avoids(arc)).copied().collect()
}

fn milnor_quarter() -> Outcome {
    let quarter = ParameterSpec::quarter();
    let m = Mating::new(MatingSpec { p: quarter, q: quarter });
    let u = AngleUniverse::new(6, 8);
    let classes = m.build_classes(&u)?;
    let mut max_diameter = 0;
    let mut all_trees = true;
    for c in &classes {
        all_trees &= c.shape == ClassShape::Tree;
        max_diameter = max_diameter.max(c.diameter);
    }
    // the spanning trees of the two sides exclude the sector (9/14, 11/14)
    // and its mirror; their common angles are the 4-cycle of 3/15 plus the
    // preimages still avoiding both sectors
    let angles = u.angles()?;
    let own = tree_angles(&angles, &mating_core::CircularArc::open(a("9/14"), a("11/14")));
    let mirrored = tree_angles(&angles, &mating_core::CircularArc::open(a("3/14"), a("5/14")));
    let common: BTreeSet<Angle> = own.intersection(&mirrored).copied().collect();
    let cycle: BTreeSet<Angle> = Angle::new(3, 15).orbit().into_iter().collect();
    let cycle_ok = cycle.iter().all(|x| common.contains(x));
    let preimage_ok = common.iter().all(|x| {
        let mut y = *x;
        loop {
            if cycle.contains(&y) {
                return true;
            }
            let pp = y.preperiod_period();
            if pp.preperiod == 0 {
                return false;
            }
            y = y.double();
        }
    });
    let pass = all_trees && max_diameter <= 3 && cycle_ok && preimage_ok;
    Ok((
        pass,
        serde_json::json!({
            "classes": classes.len(),
            "all_trees": all_trees,
            "max_diameter": max_diameter,
            "common_tree_angles": common.len(),
            "contains_3_15_cycle": cycle_ok,
            "common_angles_are_preimages_of_cycle": preimage_ok,
        }),
    ))
}

fn kokopelli_airplane() -> Outcome {
    let m = Mating::new(MatingSpec {
        p: ParameterSpec::kokopelli(),
        q: ParameterSpec::airplane(),
    });
    let u = AngleUniverse::new(6, 8);
    let classes = m.build_classes(&u)?;
    let mut all_trees = true;
    let mut max_diameter = 0;
    let mut max_periodic = 0;
    for c in &classes {
        all_trees &= c.shape == ClassShape::Tree;
        max_diameter = max_diameter.max(c.diameter);
        let periodic = c.rays.iter().all(|t| t.preperiod_period().preperiod == 0);
        if periodic {
            max_periodic = max_periodic.max(c.diameter);
        }
    }
    let check = bounded_connection_check(Limb::new(1, 4)?, ParameterSpec::airplane())?;
    let holds = matches!(check, Verdict::Holds { boundary: false, .. });
    let pass = all_trees && max_diameter <= 8 && max_periodic <= 4 && holds;
    Ok((
        pass,
        serde_json::json!({
            "all_trees": all_trees,
            "max_diameter": max_diameter,
            "max_periodic_diameter": max_periodic,
            "quarter_limb_spine_check": format!("{check:?}"),
        }),
    ))
}

fn airplane_basilica() -> Outcome {
    let m = Mating::new(MatingSpec {
        p: ParameterSpec::airplane(),
        q: ParameterSpec::basilica(),
    });
    let u = AngleUniverse::new(10, 4);
    let c0 = m.class_of(&a("5/12"), &u)?;
    let cyclic = c0.shape == ClassShape::CycleBearing && c0.rays == vec![a("5/12"), a("7/12")];
    let tower = m.pullback_connection(&[a("5/12"), a("7/12")], 6, &a("3/7"))?;
    let counts: Vec<usize> = tower.iter().map(|c| c.len()).collect();
    let counts_ok = counts == vec![4, 8, 16, 32, 64, 128];

    // p-side endpoints: the rays bracketing the small Julia set converge
    // monotonically toward 3/7, 4/7 and 25/56, 31/56
    let (target_lo, target_hi) = (a("3/7"), a("4/7"));
    let (inner_lo, inner_hi) = (a("25/56"), a("31/56"));
    let mut outer_prev: Option<(Angle, Angle)> = None;
    let mut inner_prev: Option<(Angle, Angle)> = None;
    let mut monotone = true;
    for rays in &tower {
        let lo = rays.iter().filter(|x| **x < target_lo).max().copied();
        let hi = rays.iter().filter(|x| **x > target_hi).min().copied();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            monotone = false;
            break;
        };
        if let Some((plo, phi)) = outer_prev {
            monotone &= plo < lo && hi < phi;
        }
        outer_prev = Some((lo, hi));
        let ilo = rays.iter().filter(|x| **x < inner_lo && **x > target_lo).max().copied();
        let ihi = rays.iter().filter(|x| **x > inner_hi && **x < target_hi).min().copied();
        if let (Some(ilo), Some(ihi)) = (ilo, ihi) {
            if let Some((plo, phi)) = inner_prev {
                monotone &= plo < ilo && ihi < phi;
            }
            inner_prev = Some((ilo, ihi));
        }
    }
    let pass = cyclic && counts_ok && monotone;
    Ok((
        pass,
        serde_json::json!({
            "cycle_class": cyclic,
            "pullback_ray_counts": counts,
            "endpoints_monotone": monotone,
        }),
    ))
}

fn length_six() -> Outcome {
    let p = ParameterSpec::center_of_angle(&Angle::new(13, 63))?;
    let q = ParameterSpec::center_of_angle(&Angle::new(28, 63))?;
    let m = Mating::new(MatingSpec { p, q });
    let u = AngleUniverse::new(0, 6);
    let classes = m.build_classes(&u)?;
    let best = classes.iter().map(|c| c.diameter).max().unwrap_or(0);
    let pass = best >= 6;
    Ok((pass, serde_json::json!({ "max_class_diameter": best })))
}

/// The census table rows for ray periods 10 through 24:
/// period -> [(length, primitive, satellite)].
pub const CENSUS_ROWS: &[(u32, &[(u32, u64, u64)])] = &[
    (10, &[(5, 32, 0), (6, 14, 88), (8, 0, 2)]),
    (11, &[(5, 76, 0), (6, 20, 0)]),
    (12, &[(5, 46, 0), (6, 24, 264)]),
    (13, &[(5, 226, 0), (6, 72, 0), (7, 2, 0), (8, 2, 0)]),
    (14, &[(5, 285, 0), (6, 102, 484), (7, 4, 0), (8, 0, 14), (10, 0, 2)]),
    (15, &[(5, 540, 0), (6, 192, 184)]),
    (16, &[(5, 958, 0), (6, 338, 1060), (7, 4, 0), (8, 2, 10), (10, 0, 4)]),
    (17, &[(5, 1872, 0), (6, 584, 0), (7, 14, 0), (8, 2, 0)]),
    (18, &[(5, 2814, 0), (6, 884, 2672), (7, 22, 0), (8, 6, 24), (10, 0, 8)]),
    (19, &[(5, 5856, 0), (6, 1650, 0), (7, 26, 0), (8, 6, 0)]),
    (20, &[(5, 9534, 0), (6, 2890, 5244), (7, 58, 0), (8, 4, 42), (10, 0, 8)]),
    (21, &[(5, 16978, 0), (6, 4900, 898), (7, 64, 0), (8, 4, 0)]),
    (22, &[(5, 30180, 0), (6, 8423, 10928), (7, 126, 0), (8, 18, 132), (10, 0, 20), (12, 0, 2)]),
    (23, &[(5, 55676, 0), (6, 15300, 0), (7, 172, 0), (8, 18, 0)]),
    (24, &[(5, 95830, 0), (6, 25968, 25312), (7, 242, 0), (8, 24, 96), (10, 0, 28)]),
];

fn table1(extended: bool, jobs: usize) -> Outcome {
    let last = if extended { 24 } else { 16 };
    let mut pass = true;
    let mut rows = Vec::new();
    for &(period, cells) in CENSUS_ROWS {
        if period > last {
            break;
        }
        let got = max_connections(period, SearchOptions { jobs, ..Default::default() })?;
        let want: Vec<(u32, (u64, u64))> =
            cells.iter().map(|&(l, p, s)| (l, (p, s))).collect();
        let got_cells: Vec<(u32, (u64, u64))> =
            got.cells.iter().map(|(&l, &c)| (l, c)).collect();
        let ok = got_cells == want;
        pass &= ok;
        rows.push(serde_json::json!({
            "period": period,
            "ok": ok,
            "got": got_cells.iter().map(|(l,(p,s))| format!("{l}:{p}+{s}")).collect::<Vec<_>>(),
        }));
    }
    Ok((pass, serde_json::json!({ "rows": rows })))
}

fn price22() -> Outcome {
    let chain = find_named_example(NamedExample::Price22)?;
    let mm = (1u128 << 22) - 1;
    let scale = |x: &Angle| x.numerator() * (mm / x.denominator());
    let p = (scale(&chain.p_root.lo()), scale(&chain.p_root.hi()));
    let q = (scale(&chain.q_root.lo()), scale(&chain.q_root.hi()));
    let roots_ok = (p == (1955623, 1955624) && q == (882259, 882276))
        || (q == (1955623, 1955624) && p == (882259, 882276));
    let pass = chain.length == 12 && chain.satellite && roots_ok;
    Ok((
        pass,
        serde_json::json!({
            "length": chain.length,
            "satellite": chain.satellite,
            "p_root": [p.0.to_string(), p.1.to_string()],
            "q_root": [q.0.to_string(), q.1.to_string()],
        }),
    ))
}

fn satellite32() -> Outcome {
    let chain = find_named_example(NamedExample::Satellite32)?;
    let mm = (1u128 << 32) - 1;
    let scale = |x: &Angle| x.numerator() * (mm / x.denominator());
    let p = (scale(&chain.p_root.lo()), scale(&chain.p_root.hi()));
    let q = (scale(&chain.q_root.lo()), scale(&chain.q_root.hi()));
    let roots_ok = (p == (918089177, 918089186) && q == (1998920775, 1998920776))
        || (q == (918089177, 918089186) && p == (1998920775, 1998920776));
    let pass = chain.length == 14 && chain.satellite && roots_ok;
    Ok((
        pass,
        serde_json::json!({
            "length": chain.length,
            "p_root": [p.0.to_string(), p.1.to_string()],
            "q_root": [q.0.to_string(), q.1.to_string()],
        }),
    ))
}

fn douady_magic_scenario() -> Outcome {
    let mut checked = 0;
    let mut violations = Vec::new();
    let third = a("1/3");
    for r in 2..=10u32 {
        for k in 1..r {
            if gcd(k, r) != 1 {
                continue;
            }
            let w = wake_angles(Limb::new(k, r)?);
            for theta in [w.lo(), w.hi()] {
                if theta > third {
                    continue;
                }
                let big = douady_magic(&theta)?;
                let arc = douady_forbidden_arc(&theta);
                checked += 1;
                if !big.orbit_avoids(&arc) {
                    violations.push(theta.to_string());
                }
            }
        }
    }
    let pass = violations.is_empty() && checked > 0;
    Ok((pass, serde_json::json!({ "checked": checked, "violations": violations })))
}

fn chebyshev_shared() -> Outcome {
    // the r angles at the negative fixed-point preimage give r distinct
    // Misiurewicz mates
    let angles25 = minus_alpha_angles(Limb::new(2, 5)?);
    let q_angles: Vec<Angle> = angles25.iter().map(|x| x.minus()).collect();
    let mut distinct = true;
    for i in 0..q_angles.len() {
        for j in i + 1..q_angles.len() {
            let engine = Landing::new(ParameterSpec::misiurewicz(&q_angles[i])?);
            if engine.colands(&q_angles[i], &q_angles[j])? {
                distinct = false;
            }
        }
    }
    let set13: BTreeSet<Angle> =
        minus_alpha_angles(Limb::new(1, 3)?).iter().map(|x| x.minus()).collect();
    let expected13: BTreeSet<Angle> =
        [a("3/14"), a("5/14"), a("13/14")].into_iter().collect();
    let pass = distinct && q_angles.len() == 5 && set13 == expected13;
    Ok((
        pass,
        serde_json::json!({
            "mates_2_5": q_angles.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "pairwise_distinct": distinct,
            "angles_1_3": set13.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        }),
    ))
}

fn shared_precapture() -> Outcome {
    let mut results = Vec::new();
    let mut pass = true;
    let mut check = |name: &str, spec: ParameterSpec, x: Angle, y: Angle| -> Result<(), Error> {
        let engine = Landing::new(spec);
        let co = engine.colands(&x, &y)?;
        pass &= co;
        results.push(serde_json::json!({ "case": name, "colands": co }));
        Ok(())
    };
    check(
        "11/24 precapture pair",
        ParameterSpec::misiurewicz(&a("11/24"))?,
        a("43/56"),
        a("41/56"),
    )?;
    check("basilica precapture pair", ParameterSpec::basilica(), a("17/24"), a("19/24"))?;
    check(
        "59/240 self-mating pair",
        ParameterSpec::misiurewicz(&Angle::new(59, 240))?,
        Angle::new(177, 240),
        Angle::new(181, 240),
    )?;
    check(
        "63/240 self-mating pair",
        ParameterSpec::misiurewicz(&Angle::new(63, 240))?,
        Angle::new(177, 240),
        Angle::new(181, 240),
    )?;
    Ok((pass, serde_json::json!(results)))
}

fn airplane_multiplicity() -> Outcome {
    let airplane = Landing::new(ParameterSpec::airplane());
    let sixth = a("1/6");
    let third = a("1/3");
    let mut pass = true;
    let mut rows = Vec::new();
    for n in [3u32, 5, 7] {
        let k = (n - 1) / 2;
        let limb = Limb::new(k, n)?;
        let wake = wake_angles(limb);
        let (lo, hi) = (wake.lo(), wake.hi());
        // the largest angle at the characteristic point of the real center
        let big = douady_magic(&hi)?;
        let orbit = big.orbit();
        // circular ordering: 0 < T_2 < 1/6 < T_n < ... < T_5 < T_3 < 1/3
        let t = |i: u32| orbit[(i as usize - 1) % orbit.len()];
        let half = a("1/2");
        let seven12 = a("7/12");
        let two3 = a("2/3");
        let mut order_ok = t(2) < sixth && t(3) < third && t(3) == hi;
        order_ok &= half < t(1) && t(1) < seven12;
        if n >= 5 {
            order_ok &= sixth < t(n) && t(5) == lo;
            let mut i = n;
            while i > 3 {
                order_ok &= t(i) < t(i - 2);
                i -= 2;
            }
            // even iterates descend from 2/3 toward 7/12
            order_ok &= seven12 < t(n - 1) && t(4) < two3;
            let mut i = n - 1;
            while i > 4 {
                order_ok &= t(i) < t(i - 2);
                i -= 2;
            }
        }
        // angles of preperiod n+1 inside the wake hitting the wake cycle
        let cycle: BTreeSet<Angle> = alpha_cycle(limb).into_iter().collect();
        let depth = n + 1;
        let mut thetas = Vec::new();
        let shift = 1u128 << depth;
        for base in &cycle {
            for j in 0..shift {
                let h = Angle::new(
                    base.numerator() + j * base.denominator(),
                    base.denominator() * shift,
                );
                let pp = h.preperiod_period();
                if pp.preperiod == depth && pp.period == n && wake.wake_contains(&h) {
                    thetas.push(h);
                }
            }
        }
        thetas.sort();
        thetas.dedup();
        let count_ok = thetas.len() == n as usize;
        // all land at one point of the alpha-type Misiurewicz parameter
        let mut coland_ok = count_ok;
        if count_ok {
            let pstar = Landing::new(ParameterSpec::misiurewicz(&thetas[0])?);
            for pair in thetas.windows(2) {
                coland_ok &= pstar.colands(&pair[0], &pair[1])?;
            }
        }
        // the partners on the airplane side are pairwise distinct
        let mut partners = Vec::new();
        let mut partner_ok = count_ok;
        if count_ok {
            for theta in thetas.iter().skip(1) {
                let class = airplane.landing_class(&theta.minus())?;
                if class.angles.len() != 2 {
                    partner_ok = false;
                    break;
                }
                let other =
                    if class.angles[0] == theta.minus() { class.angles[1] } else { class.angles[0] };
                partners.push(other.minus());
            }
            let unique: BTreeSet<Angle> = partners.iter().copied().collect();
            partner_ok &= unique.len() == partners.len();
            partner_ok &= partners.iter().all(|x| wake.wake_contains(x));
        }
        let ok = order_ok && count_ok && coland_ok && partner_ok;
        pass &= ok;
        rows.push(serde_json::json!({
            "n": n,
            "ordering": order_ok,
            "preperiodic_angle_count": thetas.len(),
            "coland_at_one_point": coland_ok,
            "partners_distinct": partner_ok,
        }));
    }
    Ok((pass, serde_json::json!(rows)))
}

fn discontinuity() -> Outcome {
    let mut pass = true;
    let mut rows = Vec::new();
    for n in 1..=10u32 {
        let power = 1u128 << (2 * n - 1);
        let integral = (power + 1) % 3 == 0;
        let u_n = (power + 1) / 3;
        let theta = Angle::new(u_n, 1u128 << (2 * n));
        // |theta - 1/6| = 1/(3*2^(2n)) exactly
        let sixth = Angle::new(1, 6);
        let gap = Angle::new(1, 3 * (1u128 << (2 * n)));
        let diff_ok = theta > sixth && theta.minus().plus(&sixth).minus() == gap;
        let q_angle = theta.double().minus();
        let m = Mating::new(MatingSpec {
            p: ParameterSpec::misiurewicz(&theta)?,
            q: ParameterSpec::misiurewicz(&q_angle)?,
        });
        let u = AngleUniverse::new(2 * n + 1, 2);
        let path = m.connection_between_critical_values(&u)?;
        let direct = match &path {
            Some(p) => p.length() == 1 && p.through_critical_point,
            None => false,
        };
        let ok = integral && diff_ok && direct;
        pass &= ok;
        rows.push(serde_json::json!({
            "n": n,
            "u_n": u_n.to_string(),
            "theta": theta.to_string(),
            "integral": integral,
            "gap_exact": diff_ok,
            "direct_connection": direct,
        }));
    }
    Ok((pass, serde_json::json!(rows)))
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
