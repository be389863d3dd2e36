//! The sixteen canonical product tables on `[e1,e2,e3] = e1`, the case
//! split that selects them and the automorphism fixing each one.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::algebra::{A3Coords, CommProduct};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Family(u8);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    Alpha,
    Theta,
    Gamma,
    Eta,
    Xi,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::Alpha => "alpha",
            Param::Theta => "theta",
            Param::Gamma => "gamma",
            Param::Eta => "eta",
            Param::Xi => "xi",
        }
    }
}

impl FromStr for Param {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "alpha" => Param::Alpha,
            "theta" => Param::Theta,
            "gamma" => Param::Gamma,
            "eta" => Param::Eta,
            "xi" => Param::Xi,
            _ => return Err(Error::Param(format!("unknown parameter {s:?}"))),
        })
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// Each table lists, per parameter, its coefficients on the nine free
// coordinates (e2·e2, e2·e3, e3·e3; e1, e2, e3 components), as (num, den).
type Row = [(i64, i64); 9];

const fn r(v: [i64; 9]) -> Row {
    let mut out = [(0, 1); 9];
    let mut k = 0;
    while k < 9 {
        out[k] = (v[k], 1);
        k += 1;
    }
    out
}

struct Table {
    params: &'static [Param],
    rows: &'static [Row],
}

use Param::{Alpha, Eta, Gamma, Theta, Xi};

const TABLES: [Table; 16] = [
    Table { params: &[Alpha], rows: &[r([0, 1, 0, 0, 0, -1, 0, -3, 0])] },
    Table { params: &[Alpha, Theta], rows: &[r([0, 1, 0, 0, 0, -1, 0, -3, 0]), r([1, 0, 0, 0, 0, 0, 3, 0, 0])] },
    Table { params: &[Alpha], rows: &[[(-2, 1), (1, 1), (0, 1), (2, 1), (0, 1), (-1, 1), (0, 1), (-4, 3), (0, 1)]] },
    Table { params: &[Alpha, Theta], rows: &[r([0, 1, 0, 1, 0, -1, 2, -3, 0]), r([1, 0, 0, 0, 0, 0, 3, 0, 0])] },
    Table { params: &[Alpha], rows: &[r([0, 1, 1, 0, 0, -1, 0, -3, 0])] },
    Table { params: &[Alpha], rows: &[r([1, 1, 1, 0, 0, -1, -3, -3, 0])] },
    Table { params: &[Alpha], rows: &[[(1, 1), (1, 1), (1, 1), (-1, 2), (0, 1), (-1, 1), (0, 1), (-3, 1), (0, 1)]] },
    Table {
        params: &[Alpha, Theta],
        rows: &[
            r([0, 1, 1, 0, 0, -1, 0, -3, 0]),
            [(1, 1), (0, 1), (0, 1), (-3, 2), (0, 1), (0, 1), (3, 1), (0, 1), (0, 1)],
        ],
    },
    Table { params: &[Gamma], rows: &[r([0, 0, -3, 0, -1, 0, 0, 0, 1])] },
    Table { params: &[Gamma, Eta], rows: &[r([0, 0, -3, 0, -1, 0, 0, 0, 1]), r([3, 0, 0, 0, 0, 0, 1, 0, 0])] },
    Table { params: &[Gamma], rows: &[r([4, 0, -3, 2, -1, 0, 0, 0, 1])] },
    Table { params: &[Gamma, Eta], rows: &[r([0, 0, -3, 2, -1, 0, 0, 0, 1]), r([3, 0, 0, 0, 0, 0, 1, 0, 0])] },
    Table { params: &[Gamma], rows: &[r([0, 0, -3, 0, -1, 0, 0, 1, 1])] },
    Table { params: &[Gamma], rows: &[r([2, 0, -3, 0, -1, 0, -1, 1, 1])] },
    Table { params: &[Gamma], rows: &[r([-3, 0, -3, 1, -1, 0, 0, 1, 1])] },
    Table {
        params: &[Gamma, Xi],
        rows: &[
            r([0, 0, -3, 0, -1, 0, 0, 1, 1]),
            [(-2, 1), (0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (-2, 3), (0, 1), (0, 1)],
        ],
    },
];

// Automorphisms fixing each table, indexed like the families.
const PHI: [[[(i64, i64); 3]; 3]; 16] = {
    const O: (i64, i64) = (0, 1);
    const I: (i64, i64) = (1, 1);
    const H: (i64, i64) = (1, 2);
    const MH: (i64, i64) = (-1, 2);
    const A: [[(i64, i64); 3]; 3] = [[I, O, O], [O, MH, H], [O, (-3, 2), MH]];
    const B: [[(i64, i64); 3]; 3] = [[I, O, O], [O, (-2, 1), (-1, 1)], [O, (3, 1), I]];
    const C: [[(i64, i64); 3]; 3] = [[I, O, O], [O, (-2, 1), (-3, 1)], [O, I, I]];
    [
        A,
        A,
        [[I, O, O], [(3, 1), MH, (-3, 4)], [(2, 1), I, MH]],
        [[I, O, O], [O, MH, H], [(2, 1), (-3, 2), MH]],
        B,
        [[I, O, O], [(-3, 1), (-2, 1), (-1, 1)], [(3, 1), (3, 1), I]],
        [[I, O, O], [(-2, 1), (-2, 1), (-1, 1)], [(3, 1), (3, 1), I]],
        B,
        [[I, O, O], [O, MH, (3, 2)], [O, MH, MH]],
        [[I, O, O], [O, MH, (-3, 2)], [O, H, MH]],
        [[I, O, O], [(2, 1), MH, (3, 2)], [(2, 1), MH, MH]],
        [[I, O, O], [(3, 1), MH, (-3, 2)], [(-1, 1), H, MH]],
        C,
        [[I, O, O], [I, (-2, 1), (-3, 1)], [I, I, I]],
        [[I, O, O], [O, (-2, 1), (-3, 1)], [(-1, 1), I, I]],
        C,
    ]
};

impl Family {
    pub const ALL: [Family; 16] = {
        let mut out = [Family(1); 16];
        let mut k = 0;
        while k < 16 {
            out[k] = Family(k as u8 + 1);
            k += 1;
        }
        out
    };

    pub fn new(index: u8) -> Result<Self> {
        if (1..=16).contains(&index) {
            Ok(Family(index))
        } else {
            Err(Error::UnknownFamily(format!("T{index}")))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    fn table(self) -> &'static Table {
        &TABLES[self.0 as usize - 1]
    }

    pub fn params(self) -> &'static [Param] {
        self.table().params
    }

    /// The parameter scaling the quotient part (`alpha` or `gamma`); every
    /// other parameter only moves the `e1` components.
    pub fn scale_param(self) -> Param {
        self.params()[0]
    }

    /// Linear coefficients of parameter `k` on the nine free coordinates.
    pub fn coefficients(self, k: usize) -> [Rational; 9] {
        self.table().rows[k].map(|(n, d)| Rational::frac(n, d))
    }

    /// The automorphism that fixes every instance of this family.
    pub fn phi(self) -> Matrix {
        Matrix::from_rows(
            PHI[self.0 as usize - 1]
                .iter()
                .map(|row| row.iter().map(|&(n, d)| Rational::frac(n, d)).collect())
                .collect(),
        )
        .expect("3x3")
    }

    pub fn case(self) -> CaseId {
        let k = self.0 - 1;
        CaseId { case: k / 4 + 1, sub: Subcase::ALL[(k % 4) as usize] }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.0)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let digits = s.strip_prefix('T').or_else(|| s.strip_prefix('t'));
        digits
            .and_then(|d| d.parse::<u8>().ok())
            .and_then(|k| Family::new(k).ok())
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A family together with values for exactly its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyInstance {
    pub family: Family,
    #[serde(serialize_with = "serialize_params")]
    pub params: BTreeMap<Param, Rational>,
}

fn serialize_params<S: Serializer>(p: &BTreeMap<Param, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut sorted: Vec<_> = p.iter().map(|(k, v)| (k.name(), v)).collect();
    sorted.sort_by_key(|(k, _)| *k);
    let mut m = s.serialize_map(Some(sorted.len()))?;
    for (k, v) in sorted {
        m.serialize_entry(k, v)?;
    }
    m.end()
}

impl FamilyInstance {
    pub fn new(family: Family, params: BTreeMap<Param, Rational>) -> Result<Self> {
        let wanted = family.params();
        for k in params.keys() {
            if !wanted.contains(k) {
                return Err(Error::Param(format!("{family} has no parameter {k}")));
            }
        }
        for k in wanted {
            if !params.contains_key(k) {
                return Err(Error::Param(format!("{family} needs parameter {k}")));
            }
        }
        if params[&family.scale_param()].is_zero() {
            return Err(Error::Param(format!("{} must be nonzero", family.scale_param())));
        }
        Ok(FamilyInstance { family, params })
    }

    /// Parameters in the family's own order.
    pub fn with_values(family: Family, values: &[Rational]) -> Result<Self> {
        if values.len() != family.params().len() {
            return Err(Error::Param(format!("{family} takes {} parameter(s)", family.params().len())));
        }
        Self::new(family, family.params().iter().copied().zip(values.iter().cloned()).collect())
    }

    pub fn values(&self) -> Vec<Rational> {
        self.family.params().iter().map(|k| self.params[k].clone()).collect()
    }

    pub fn coords(&self) -> A3Coords {
        let mut c = vec![Rational::zero(); 9];
        for (k, v) in self.values().iter().enumerate() {
            for (slot, a) in c.iter_mut().zip(self.family.coefficients(k)) {
                *slot += &a * v;
            }
        }
        A3Coords::from_slice(&c)
    }

    pub fn product(&self) -> CommProduct {
        self.coords().to_product()
    }

    /// Random parameters with small numerators and denominators; the scale
    /// parameter is never zero.
    pub fn random<R: Rng>(family: Family, rng: &mut R) -> Self {
        let values: Vec<Rational> = (0..family.params().len())
            .map(|k| loop {
                let v = Rational::frac(rng.gen_range(-9..=9), rng.gen_range(1..=5));
                if k > 0 || !v.is_zero() {
                    break v;
                }
            })
            .collect();
        Self::with_values(family, &values).expect("arity matches")
    }
}

impl fmt::Display for FamilyInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.family)?;
        for (k, p) in self.family.params().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}={}", self.params[p])?;
        }
        write!(f, ")")
    }
}

pub fn instantiate_family(inst: &FamilyInstance) -> CommProduct {
    inst.product()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subcase {
    A,
    B,
    C,
    D,
}

impl Subcase {
    pub const ALL: [Subcase; 4] = [Subcase::A, Subcase::B, Subcase::C, Subcase::D];

    fn letter(self) -> char {
        match self {
            Subcase::A => 'a',
            Subcase::B => 'b',
            Subcase::C => 'c',
            Subcase::D => 'd',
        }
    }
}

/// One of the sixteen normalization cases, written `1-a` … `4-d`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaseId {
    pub case: u8,
    pub sub: Subcase,
}

impl CaseId {
    pub fn all() -> Vec<CaseId> {
        Family::ALL.iter().map(|f| f.case()).collect()
    }

    pub fn family(self) -> Family {
        let s = Subcase::ALL.iter().position(|&x| x == self.sub).unwrap() as u8;
        Family((self.case - 1) * 4 + s + 1)
    }

    /// The other families reached from the same case.
    pub fn siblings(self) -> Vec<Family> {
        (1..=4).map(|s| Family((self.case - 1) * 4 + s)).collect()
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.case, self.sub.letter())
    }
}

impl FromStr for CaseId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownCase(s.to_string());
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (c, l) = t.split_once('-').ok_or_else(bad)?;
        let case: u8 = c.parse().map_err(|_| bad())?;
        if !(1..=4).contains(&case) {
            return Err(bad());
        }
        let sub = match l {
            "a" => Subcase::A,
            "b" => Subcase::B,
            "c" => Subcase::C,
            "d" => Subcase::D,
            _ => return Err(bad()),
        };
        Ok(CaseId { case, sub })
    }
}

impl Serialize for CaseId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Reads off which normalization case a compatible product falls in, from
/// the zero pattern of its coordinates. Products matching no pattern get
/// [`Error::ShapeMismatch`].
pub fn detect_case(p: &CommProduct) -> Result<CaseId> {
    let c = A3Coords::from_product(p)?;
    let z = |x: &Rational| x.is_zero();
    let [b21, b22, b23] = &c.e2e2;
    let [b31, b32, b33] = &c.e2e3;
    let [c31, c32, c33] = &c.e3e3;
    let case = if z(b32) && z(c33) && !z(b33) && (b33 + b22).is_zero() && !z(c32) {
        if z(b23) {
            1
        } else {
            2
        }
    } else if z(b22) && z(b33) && !z(b32) && (b32 + c33).is_zero() && !z(b23) {
        if z(c32) {
            3
        } else {
            4
        }
    } else {
        return Err(Error::ShapeMismatch("the coordinates match none of the normalization patterns".into()));
    };
    let sub = if z(b21) {
        Subcase::A
    } else if z(b31) {
        Subcase::B
    } else if z(c31) {
        Subcase::C
    } else {
        Subcase::D
    };
    Ok(CaseId { case, sub })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_transposed_leibniz, TriBracket};
    use crate::morphisms::{a3_automorphism_check, is_bracket_automorphism, transport_product, AutoMatrix};
    use crate::rational::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parse_and_print() {
        assert_eq!("T7".parse::<Family>().unwrap().to_string(), "T7");
        assert!("T0".parse::<Family>().is_err());
        assert!("T17".parse::<Family>().is_err());
        assert!("X3".parse::<Family>().is_err());
        assert_eq!("4-c".parse::<CaseId>().unwrap().family().to_string(), "T15");
        assert_eq!("(2-b)".parse::<CaseId>().unwrap().to_string(), "2-b");
        assert!("5-a".parse::<CaseId>().is_err());
        assert!("1-e".parse::<CaseId>().is_err());
    }

    #[test]
    fn parameters_are_exactly_the_familys() {
        let f: Family = "T2".parse().unwrap();
        assert!(FamilyInstance::with_values(f, &[int(1)]).is_err());
        let mut m = BTreeMap::new();
        m.insert(Param::Alpha, int(1));
        m.insert(Param::Gamma, int(1));
        assert!(FamilyInstance::new(f, m).is_err());
        assert!(FamilyInstance::with_values(f, &[int(0), int(1)]).is_err());
        assert!(FamilyInstance::with_values(f, &[int(1), int(0)]).is_ok());
    }

    #[test]
    fn sample_entries() {
        let t3 = FamilyInstance::with_values("T3".parse().unwrap(), &[int(3)]).unwrap();
        assert_eq!(t3.coords().e3e3, [int(0), int(-4), int(0)]);
        let t16 = FamilyInstance::with_values("T16".parse().unwrap(), &[int(1), int(3)]).unwrap();
        assert_eq!(t16.coords().e3e3, [int(-2), int(1), int(1)]);
        let t8 = FamilyInstance::with_values("T8".parse().unwrap(), &[int(1), int(2)]).unwrap();
        assert_eq!(t8.coords().e2e3, [int(-3), int(0), int(-1)]);
    }

    #[test]
    fn every_family_is_compatible_and_fixed_by_its_automorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in Family::ALL {
            let phi = f.phi();
            assert!(a3_automorphism_check(&phi), "{f}");
            let phi = AutoMatrix::new(phi).unwrap();
            assert!(is_bracket_automorphism(&TriBracket::a3(), &phi).unwrap().passed());
            for _ in 0..10 {
                let inst = FamilyInstance::random(f, &mut rng);
                let p = inst.product();
                assert!(check_transposed_leibniz(&TriBracket::a3(), &p).unwrap().passed());
                assert_eq!(transport_product(&p, &phi).unwrap(), p, "{inst}");
            }
        }
    }

    #[test]
    fn cases_are_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in Family::ALL {
            for _ in 0..20 {
                let inst = FamilyInstance::random(f, &mut rng);
                let got = detect_case(&inst.product()).unwrap();
                assert_eq!(got.case, f.case().case, "{inst}");
                // the subcase needs its nonvanishing conditions, which random
                // secondary parameters may violate
                let generic = inst.values().iter().all(|v| !v.is_zero())
                    && !(f.index() == 4 && (&int(3) * &inst.values()[1] + &int(2) * &inst.values()[0]).is_zero());
                if generic {
                    assert_eq!(got, f.case(), "{inst}");
                }
            }
        }
        let t4 = FamilyInstance::with_values("T4".parse().unwrap(), &[int(3), int(-2)]).unwrap();
        assert_eq!(detect_case(&t4.product()).unwrap().to_string(), "1-c");
        let z = CommProduct::zero(3);
        assert!(matches!(detect_case(&z), Err(Error::ShapeMismatch(_))));
    }
}
