//! Rational angles modulo 1 and their symbolic dynamics under doubling.
//!
//! An [`Angle`] is a reduced fraction `num/den` of a full turn. The doubling
//! map `t -> 2t mod 1` acts on angles; rational angles are eventually periodic
//! and the pair (preperiod, period) together with the binary expansion is the
//! symbolic skeleton everything else builds on.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A rational angle in `[0, 1)`, measured in turns, always reduced.
///
/// All arithmetic is exact; any overflow of the 128-bit backing integers is a
/// hard error. Denominators up to `2^40 * (2^40 - 1)` stay far inside range.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Angle {
    num: u128,
    den: u128,
}

/// Minimal preperiod and period of an angle under doubling.
///
/// Dyadic angles fall onto the fixed angle 0, so they get period 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PreperiodPeriod {
    pub preperiod: u32,
    pub period: u32,
}

/// The binary expansion of an angle: a preperiodic word followed by a
/// repeating periodic word. Word lengths are the minimal (preperiod, period).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryExpansion {
    pub preperiodic: Vec<u8>,
    pub periodic: Vec<u8>,
}

/// An arc of the circle running counterclockwise from `from` to `to`.
///
/// Endpoint membership is controlled by the two openness flags; the default
/// constructors build open arcs. Membership tests are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircularArc {
    pub from: Angle,
    pub to: Angle,
    pub include_from: bool,
    pub include_to: bool,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// Compare a/b with c/d exactly. Operands can be up to ~2^81, so the products
// are formed in 256 bits (as hi/lo u128 pairs).
fn cmp_frac(a: u128, b: u128, c: u128, d: u128) -> Ordering {
    fn wide_mul(x: u128, y: u128) -> (u128, u128) {
        const MASK: u128 = (1u128 << 64) - 1;
        let (x0, x1) = (x & MASK, x >> 64);
        let (y0, y1) = (y & MASK, y >> 64);
        let lo = x0 * y0;
        let mid1 = x0 * y1;
        let mid2 = x1 * y0;
        let hi = x1 * y1;
        let (lo2, c1) = lo.overflowing_add(mid1 << 64);
        let (lo3, c2) = lo2.overflowing_add(mid2 << 64);
        let hi2 = hi + (mid1 >> 64) + (mid2 >> 64) + c1 as u128 + c2 as u128;
        (hi2, lo3)
    }
    let (lh, ll) = wide_mul(a, d);
    let (rh, rl) = wide_mul(c, b);
    lh.cmp(&rh).then(ll.cmp(&rl))
}

impl Angle {
    /// The angle `num/den` reduced modulo 1. `den` must be positive.
    pub fn new(num: u128, den: u128) -> Angle {
        assert!(den > 0, "angle denominator must be positive");
        let num = num % den;
        let g = gcd(num, den);
        if num == 0 {
            return Angle { num: 0, den: 1 };
        }
        Angle { num: num / g, den: den / g }
    }

    pub const ZERO: Angle = Angle { num: 0, den: 1 };

    /// Parse `num/den`, rejecting unreduced or out-of-range input.
    pub fn parse_fraction(s: &str) -> Result<Angle> {
        let (n, d) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("expected num/den, got {s:?}")))?;
        let num: u128 = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let den: u128 = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        if num >= den {
            return Err(Error::Parse(format!(
                "angle {s} out of range: need 0 <= num < den"
            )));
        }
        if gcd(num, den) != 1 && num != 0 {
            return Err(Error::Parse(format!("angle {s} is not reduced")));
        }
        Ok(Angle::new(num, den))
    }

    pub fn numerator(&self) -> u128 {
        self.num
    }

    pub fn denominator(&self) -> u128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Dyadic angles land on the fixed angle 0 after finitely many doublings.
    pub fn is_dyadic(&self) -> bool {
        self.den.is_power_of_two()
    }

    /// Periodic under doubling, i.e. odd denominator. The zero angle counts.
    pub fn is_periodic(&self) -> bool {
        self.den % 2 == 1
    }

    /// Image under the doubling map: `2a mod 1`.
    pub fn double(&self) -> Angle {
        let num = self.num.checked_mul(2).expect("angle arithmetic overflow");
        Angle::new(num, self.den)
    }

    /// Iterated doubling.
    pub fn double_n(&self, n: u32) -> Angle {
        // 2^n mod den via fast exponentiation keeps numbers small.
        let mut factor: u128 = 1;
        let mut base: u128 = 2 % self.den.max(1);
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                factor = factor.checked_mul(base).expect("angle arithmetic overflow") % self.den;
            }
            base = base.checked_mul(base).expect("angle arithmetic overflow") % self.den;
            e >>= 1;
        }
        Angle::new(
            self.num.checked_mul(factor).expect("angle arithmetic overflow") % self.den,
            self.den,
        )
    }

    /// The two preimages under doubling: `a/2` and `(a+1)/2`.
    pub fn halves(&self) -> (Angle, Angle) {
        let den = self.den.checked_mul(2).expect("angle arithmetic overflow");
        let lo = Angle::new(self.num, den);
        let hi = Angle::new(
            self.num.checked_add(self.den).expect("angle arithmetic overflow"),
            den,
        );
        (lo, hi)
    }

    /// The mirror angle `1 - a mod 1`; an involution fixing 0 and 1/2.
    pub fn minus(&self) -> Angle {
        if self.num == 0 {
            return Angle::ZERO;
        }
        Angle { num: self.den - self.num, den: self.den }
    }

    /// Sum modulo 1.
    pub fn plus(&self, other: &Angle) -> Angle {
        let den = self.den.checked_mul(other.den).expect("angle arithmetic overflow");
        let num = self
            .num
            .checked_mul(other.den)
            .and_then(|x| x.checked_add(other.num.checked_mul(self.den)?))
            .expect("angle arithmetic overflow");
        Angle::new(num, den)
    }

    /// Half turn away: `a + 1/2 mod 1`.
    pub fn opposite(&self) -> Angle {
        self.plus(&Angle::new(1, 2))
    }

    /// Exact midpoint of `a` and `b` as numbers in `[0,1)` (not arc midpoint).
    pub fn midpoint(&self, other: &Angle) -> Angle {
        let den = self
            .den
            .checked_mul(other.den)
            .and_then(|x| x.checked_mul(2))
            .expect("angle arithmetic overflow");
        let num = self
            .num
            .checked_mul(other.den)
            .and_then(|x| x.checked_add(other.num.checked_mul(self.den)?))
            .expect("angle arithmetic overflow");
        Angle::new(num, den)
    }

    /// Minimal preperiod and period under doubling.
    ///
    /// The preperiod is the 2-adic valuation of the denominator; the period is
    /// the multiplicative order of 2 modulo the odd part.
    pub fn preperiod_period(&self) -> PreperiodPeriod {
        let mut odd = self.den;
        let mut preperiod = 0u32;
        while odd % 2 == 0 {
            odd /= 2;
            preperiod += 1;
        }
        if odd == 1 {
            // dyadic: the orbit ends on the fixed angle 0
            return PreperiodPeriod { preperiod, period: 1 };
        }
        let mut period = 1u32;
        let mut pow: u128 = 2 % odd;
        const CAP: u32 = 1 << 22;
        while pow != 1 {
            pow = pow.checked_mul(2).expect("angle arithmetic overflow") % odd;
            period += 1;
            assert!(period < CAP, "angle period exceeds supported range");
        }
        PreperiodPeriod { preperiod, period }
    }

    /// The forward orbit `a, 2a, 4a, ...` up to (excluding) the first repeat.
    /// Its length is exactly preperiod + period.
    pub fn orbit(&self) -> Vec<Angle> {
        let pp = self.preperiod_period();
        let mut out = Vec::with_capacity((pp.preperiod + pp.period) as usize);
        let mut a = *self;
        for _ in 0..pp.preperiod + pp.period {
            out.push(a);
            a = a.double();
        }
        out
    }

    /// True iff no point of the forward orbit lies in the arc.
    pub fn orbit_avoids(&self, arc: &CircularArc) -> bool {
        self.orbit().iter().all(|a| !arc.contains(a))
    }

    /// Exact binary expansion with minimal preperiodic/periodic word lengths.
    pub fn binary_expansion(&self) -> BinaryExpansion {
        let pp = self.preperiod_period();
        let mut bits = Vec::with_capacity((pp.preperiod + pp.period) as usize);
        let mut a = *self;
        for _ in 0..pp.preperiod + pp.period {
            let num2 = a.num.checked_mul(2).expect("angle arithmetic overflow");
            bits.push(u8::from(num2 >= a.den));
            a = a.double();
        }
        let periodic = bits.split_off(pp.preperiod as usize);
        BinaryExpansion { preperiodic: bits, periodic }
    }

    /// Strictly counterclockwise between `from` and `to` (both excluded).
    pub fn in_open_arc(&self, from: &Angle, to: &Angle) -> bool {
        CircularArc::open(*from, *to).contains(self)
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_frac(self.num, self.den, other.num, other.den)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

// Debug prints the fraction too, keeping test output readable.
impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Angle {
    type Err = Error;

    /// Accepts the decimal form `num/den` and the binary form
    /// `p:<preperiodic>:<periodic>`, e.g. `p:10:01` for 7/12.
    fn from_str(s: &str) -> Result<Angle> {
        if let Some(rest) = s.strip_prefix("p:") {
            let (pre, per) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected p:<pre>:<per>, got {s:?}")))?;
            let parse_word = |w: &str| -> Result<Vec<u8>> {
                w.chars()
                    .map(|c| match c {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        _ => Err(Error::Parse(format!("bad binary digit {c:?} in {s:?}"))),
                    })
                    .collect()
            };
            let expansion = BinaryExpansion {
                preperiodic: parse_word(pre)?,
                periodic: parse_word(per)?,
            };
            if expansion.periodic.is_empty() {
                return Err(Error::Parse(format!("empty periodic word in {s:?}")));
            }
            Ok(expansion.to_angle())
        } else {
            Angle::parse_fraction(s)
        }
    }
}

impl TryFrom<String> for Angle {
    type Error = Error;
    fn try_from(s: String) -> Result<Angle> {
        s.parse()
    }
}

impl From<Angle> for String {
    fn from(a: Angle) -> String {
        a.to_string()
    }
}

impl BinaryExpansion {
    /// Evaluate the expansion back to an exact angle.
    pub fn to_angle(&self) -> Angle {
        let l = self.preperiodic.len() as u32;
        let k = self.periodic.len() as u32;
        assert!(k > 0, "periodic word must be non-empty");
        assert!(l + k <= 100, "expansion too long for exact evaluation");
        let word_val = |w: &[u8]| w.iter().fold(0u128, |acc, &b| acc * 2 + u128::from(b));
        let pre = word_val(&self.preperiodic);
        let per = word_val(&self.periodic);
        let pk = (1u128 << k) - 1;
        // (pre * (2^k - 1) + per) / (2^l * (2^k - 1))
        let num = pre * pk + per;
        let den = (1u128 << l) * pk;
        Angle::new(num, den)
    }
}

impl fmt::Display for BinaryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = |word: &[u8]| word.iter().map(|b| char::from(b'0' + b)).collect::<String>();
        write!(f, "p:{}:{}", w(&self.preperiodic), w(&self.periodic))
    }
}

impl CircularArc {
    /// The open arc counterclockwise from `from` to `to`.
    pub fn open(from: Angle, to: Angle) -> CircularArc {
        CircularArc { from, to, include_from: false, include_to: false }
    }

    /// Exact membership test. For `from == to` the open arc is empty and the
    /// closed arc is the single point.
    pub fn contains(&self, a: &Angle) -> bool {
        if *a == self.from {
            return self.include_from;
        }
        if *a == self.to {
            return self.include_to;
        }
        if self.from == self.to {
            return false;
        }
        if self.from < self.to {
            self.from < *a && *a < self.to
        } else {
            *a > self.from || *a < self.to
        }
    }

    /// Chords cross iff exactly one endpoint of the other lies strictly
    /// inside this arc.
    pub fn crosses_chord(&self, c: &Angle, d: &Angle) -> bool {
        let arc = CircularArc::open(self.from, self.to);
        arc.contains(c) != arc.contains(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    // Long-division oracle for binary digits, independent of the expansion
    // code above: repeatedly double the numerator and take integer parts.
    fn long_division_digits(mut num: u128, den: u128, count: usize) -> Vec<u8> {
        let mut out = Vec::new();
        for _ in 0..count {
            num *= 2;
            if num >= den {
                out.push(1);
                num -= den;
            } else {
                out.push(0);
            }
        }
        out
    }

    #[test]
    fn doubling_and_halves() {
        assert_eq!(a("11/31").double(), a("22/31"));
        assert_eq!(Angle::ZERO.double(), Angle::ZERO);
        assert_eq!(a("19/62").double(), a("19/31"));

        assert_eq!(a("1/3").halves(), (a("1/6"), a("2/3")));
        assert_eq!(Angle::ZERO.halves(), (Angle::ZERO, a("1/2")));
        assert_eq!(a("5/6").halves(), (a("5/12"), a("11/12")));
    }

    #[test]
    fn halves_double_back() {
        for num in 0..120u128 {
            let x = Angle::new(num, 121);
            let (lo, hi) = x.halves();
            assert_eq!(lo.double(), x);
            assert_eq!(hi.double(), x);
        }
    }

    #[test]
    fn preperiod_period_examples() {
        assert_eq!(a("11/31").preperiod_period(), PreperiodPeriod { preperiod: 0, period: 5 });
        assert_eq!(a("19/62").preperiod_period(), PreperiodPeriod { preperiod: 1, period: 5 });
        assert_eq!(a("1/4").preperiod_period(), PreperiodPeriod { preperiod: 2, period: 1 });
    }

    #[test]
    fn preperiod_minimality_by_orbit_enumeration() {
        // brute-force minimality check on a modest denominator range
        for den in 1..200u128 {
            for num in 0..den {
                let x = Angle::new(num, den);
                let pp = x.preperiod_period();
                let mut seen = std::collections::HashMap::new();
                let mut cur = x;
                let (l, k);
                let mut i = 0u32;
                loop {
                    if let Some(&j) = seen.get(&cur) {
                        l = j;
                        k = i - j;
                        break;
                    }
                    seen.insert(cur, i);
                    cur = cur.double();
                    i += 1;
                }
                assert_eq!((pp.preperiod, pp.period), (l, k), "angle {x}");
            }
        }
    }

    #[test]
    fn doubling_drops_preperiod() {
        for den in 1..150u128 {
            for num in 0..den {
                let x = Angle::new(num, den);
                let pp = x.preperiod_period();
                let pd = x.double().preperiod_period();
                assert_eq!(pd.period, pp.period);
                assert_eq!(pd.preperiod, pp.preperiod.saturating_sub(1));
            }
        }
    }

    #[test]
    fn binary_expansion_examples() {
        let e = a("18/31").binary_expansion();
        assert_eq!(e.preperiodic, Vec::<u8>::new());
        assert_eq!(e.periodic, vec![1, 0, 0, 1, 0]);

        let e = a("7/12").binary_expansion();
        assert_eq!(e.preperiodic, vec![1, 0]);
        assert_eq!(e.periodic, vec![0, 1]);

        let e = a("1/2").binary_expansion();
        assert_eq!(e.preperiodic, vec![1]);
        assert_eq!(e.periodic, vec![0]);
    }

    #[test]
    fn binary_expansion_matches_long_division() {
        for den in 1..120u128 {
            for num in 0..den {
                let x = Angle::new(num, den);
                let e = x.binary_expansion();
                let all: Vec<u8> = e
                    .preperiodic
                    .iter()
                    .chain(e.periodic.iter().cycle().take(2 * e.periodic.len()))
                    .copied()
                    .collect();
                let oracle = long_division_digits(x.numerator(), x.denominator(), all.len());
                assert_eq!(all, oracle, "angle {x}");
            }
        }
    }

    #[test]
    fn binary_expansion_round_trips() {
        for den in 1..200u128 {
            for num in 0..den {
                let x = Angle::new(num, den);
                let pp = x.preperiod_period();
                if pp.preperiod + pp.period > 100 {
                    continue; // beyond exact re-evaluation range
                }
                assert_eq!(x.binary_expansion().to_angle(), x);
            }
        }
    }

    #[test]
    fn periodic_word_is_primitive() {
        for den in (1..400u128).step_by(2) {
            let x = Angle::new(1, den);
            let w = x.binary_expansion().periodic;
            let k = w.len();
            for d in 1..k {
                if k % d == 0 {
                    assert!(
                        (0..k).any(|i| w[i] != w[i % d]),
                        "periodic word of {x} is a proper power"
                    );
                }
            }
        }
    }

    #[test]
    fn minus_examples_and_involution() {
        assert_eq!(a("19/62").minus(), a("43/62"));
        assert_eq!(Angle::ZERO.minus(), Angle::ZERO);
        assert_eq!(a("3/14").minus(), a("11/14"));
        for den in 1..150u128 {
            for num in 0..den {
                let x = Angle::new(num, den);
                assert_eq!(x.minus().minus(), x);
                let (p, q) = (x.preperiod_period(), x.minus().preperiod_period());
                assert_eq!(p, q);
            }
        }
    }

    #[test]
    fn orbit_examples() {
        let o: Vec<Angle> = a("18/31").orbit();
        assert_eq!(o, vec![a("18/31"), a("5/31"), a("10/31"), a("20/31"), a("9/31")]);
        assert_eq!(a("1/3").orbit(), vec![a("1/3"), a("2/3")]);
        assert_eq!(a("1/4").orbit(), vec![a("1/4"), a("1/2"), Angle::ZERO]);
    }

    #[test]
    fn orbit_length_is_preperiod_plus_period() {
        for den in 1..200u128 {
            for num in 0..den {
                let x = Angle::new(num, den);
                let pp = x.preperiod_period();
                assert_eq!(x.orbit().len() as u32, pp.preperiod + pp.period);
            }
        }
    }

    #[test]
    fn orbit_avoids_examples() {
        // the arc ((t+1)/4, (t+2)/4) for t = 1/3 is (1/3, 7/12)
        let arc = CircularArc::open(a("1/3"), a("7/12"));
        assert!(a("7/12").orbit_avoids(&arc));
        assert!(Angle::ZERO.orbit_avoids(&CircularArc::open(a("1/5"), a("2/5"))));
        assert!(!a("1/3").orbit_avoids(&CircularArc::open(a("1/4"), a("1/2"))));
    }

    #[test]
    fn arc_membership_wraps() {
        let arc = CircularArc::open(a("6/7"), a("1/7"));
        assert!(arc.contains(&Angle::ZERO));
        assert!(arc.contains(&a("13/14")));
        assert!(!arc.contains(&a("1/2")));
        assert!(!arc.contains(&a("6/7")));
        let closed = CircularArc { include_from: true, ..arc };
        assert!(closed.contains(&a("6/7")));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(a("p:10:01"), a("7/12"));
        assert_eq!(a("p::10010"), a("18/31"));
        assert_eq!(a("p:1:0"), a("1/2"));
        assert_eq!(a("11/31").to_string(), "11/31");
        assert!(Angle::parse_fraction("2/4").is_err());
        assert!(Angle::parse_fraction("5/3").is_err());
        assert!(Angle::parse_fraction("1/0").is_err());
        assert!("p:1:".parse::<Angle>().is_err());
        assert!("x:1:0".parse::<Angle>().is_err());
    }

    #[test]
    fn ordering_is_exact() {
        assert!(a("9/31") < a("19/62"));
        assert!(a("19/62") < a("10/31"));
        // denominators near the top of the supported range still compare
        let big = (1u128 << 40) * ((1u128 << 40) - 1);
        let x = Angle::new(big / 3, big);
        let y = Angle::new(big / 3 + 1, big);
        assert!(x < y);
    }
}
