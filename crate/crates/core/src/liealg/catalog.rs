//! Built-in algebras: the real three-dimensional classes plus the two
//! seven-dimensional characteristically nilpotent algebras `gF`, `gE`.
//!
//! Three-dimensional constants follow Mubarakzyanov's canonical forms.

use std::fmt;
use std::str::FromStr;

use num::{Signed, Zero};

use super::StructureTensor;
use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraClass {
    /// `3A1`, abelian.
    Abelian3,
    /// `A2.1+A1`: `[e1,e2]=e1`.
    A21A1,
    /// `A3.1`: `[e2,e3]=e1`.
    A31,
    /// `A3.2`: `[e1,e3]=e1`, `[e2,e3]=e1+e2`.
    A32,
    /// `A3.3`: `[e1,e3]=e1`, `[e2,e3]=e2`.
    A33,
    /// `A3.4^a`: `[e1,e3]=e1`, `[e2,e3]=a e2`, `0<|a|<=1`, `a≠1`.
    A34(Q),
    /// `A3.5^b`: `[e1,e3]=b e1−e2`, `[e2,e3]=e1+b e2`, `b>=0`.
    A35(Q),
    Sl2R,
    So3,
    GF,
    GE,
}

impl AlgebraClass {
    pub fn label(&self) -> &'static str {
        match self {
            AlgebraClass::Abelian3 => "3A1",
            AlgebraClass::A21A1 => "A2.1+A1",
            AlgebraClass::A31 => "A3.1",
            AlgebraClass::A32 => "A3.2",
            AlgebraClass::A33 => "A3.3",
            AlgebraClass::A34(_) => "A3.4",
            AlgebraClass::A35(_) => "A3.5",
            AlgebraClass::Sl2R => "sl2R",
            AlgebraClass::So3 => "so3",
            AlgebraClass::GF => "gF",
            AlgebraClass::GE => "gE",
        }
    }

    /// Name and value of the family parameter, if any.
    pub fn parameter(&self) -> Option<(&'static str, &Q)> {
        match self {
            AlgebraClass::A34(a) => Some(("a", a)),
            AlgebraClass::A35(b) => Some(("b", b)),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AlgebraClass::GF | AlgebraClass::GE => 7,
            _ => 3,
        }
    }

    /// Parses a bare label plus an optional `a=..` / `b=..` parameter.
    pub fn parse(name: &str, param: Option<&str>) -> Result<Self> {
        let value = |expect: &str| -> Result<Q> {
            let p = param.ok_or_else(|| {
                Error::ParameterOutOfRange(format!("{name} needs a parameter {expect}=..."))
            })?;
            let (k, v) = p.split_once('=').unwrap_or((expect, p));
            if k.trim() != expect {
                return Err(Error::ParameterOutOfRange(format!(
                    "{name} takes parameter {expect}, got {k}"
                )));
            }
            parse_q(v)
        };
        let class = match name.trim() {
            "3A1" => AlgebraClass::Abelian3,
            "A2.1+A1" | "A2.1⊕A1" => AlgebraClass::A21A1,
            "A3.1" => AlgebraClass::A31,
            "A3.2" => AlgebraClass::A32,
            "A3.3" => AlgebraClass::A33,
            "A3.4" => AlgebraClass::A34(value("a")?),
            "A3.5" => AlgebraClass::A35(value("b")?),
            "sl2R" => AlgebraClass::Sl2R,
            "so3" => AlgebraClass::So3,
            "gF" => AlgebraClass::GF,
            "gE" => AlgebraClass::GE,
            other => return Err(Error::UnknownName(other.to_string())),
        };
        if param.is_some() && class.parameter().is_none() {
            return Err(Error::ParameterOutOfRange(format!("{name} takes no parameter")));
        }
        class.check_range()?;
        Ok(class)
    }

    fn check_range(&self) -> Result<()> {
        match self {
            AlgebraClass::A34(a) => {
                if a.is_zero() || a.abs() > q(1) || *a == q(1) {
                    return Err(Error::ParameterOutOfRange(format!(
                        "A3.4 needs 0<|a|<=1 with a≠1 (a=1 is A3.3), got a={}",
                        fmt_q(a)
                    )));
                }
            }
            AlgebraClass::A35(b)
                if b.is_negative() => {
                    return Err(Error::ParameterOutOfRange(format!(
                        "A3.5 needs b>=0, got b={}",
                        fmt_q(b)
                    )));
                }
            _ => {}
        }
        Ok(())
    }

    pub fn tensor(&self) -> StructureTensor {
        let one = || q(1);
        let rel = |i, j, rhs: Vec<(usize, Q)>| (i, j, rhs);
        match self {
            AlgebraClass::Abelian3 => StructureTensor::zeros(3),
            AlgebraClass::A21A1 => {
                StructureTensor::from_relations(3, &[rel(1, 2, vec![(1, one())])])
            }
            AlgebraClass::A31 => StructureTensor::from_relations(3, &[rel(2, 3, vec![(1, one())])]),
            AlgebraClass::A32 => StructureTensor::from_relations(
                3,
                &[rel(1, 3, vec![(1, one())]), rel(2, 3, vec![(1, one()), (2, one())])],
            ),
            AlgebraClass::A33 => StructureTensor::from_relations(
                3,
                &[rel(1, 3, vec![(1, one())]), rel(2, 3, vec![(2, one())])],
            ),
            AlgebraClass::A34(a) => StructureTensor::from_relations(
                3,
                &[rel(1, 3, vec![(1, one())]), rel(2, 3, vec![(2, a.clone())])],
            ),
            AlgebraClass::A35(b) => StructureTensor::from_relations(
                3,
                &[
                    rel(1, 3, vec![(1, b.clone()), (2, q(-1))]),
                    rel(2, 3, vec![(1, one()), (2, b.clone())]),
                ],
            ),
            AlgebraClass::Sl2R => StructureTensor::from_relations(
                3,
                &[
                    rel(1, 2, vec![(1, one())]),
                    rel(2, 3, vec![(3, one())]),
                    rel(1, 3, vec![(2, q(2))]),
                ],
            ),
            AlgebraClass::So3 => StructureTensor::from_relations(
                3,
                &[
                    rel(1, 2, vec![(3, one())]),
                    rel(2, 3, vec![(1, one())]),
                    rel(3, 1, vec![(2, one())]),
                ],
            ),
            AlgebraClass::GF | AlgebraClass::GE => {
                let mut rels: Vec<(usize, usize, Vec<(usize, Q)>)> =
                    (2..=6).map(|i| rel(1, i, vec![(i + 1, one())])).collect();
                if *self == AlgebraClass::GF {
                    rels.push(rel(2, 3, vec![(6, one())]));
                    rels.push(rel(2, 4, vec![(7, one())]));
                    rels.push(rel(2, 5, vec![(7, one())]));
                    rels.push(rel(3, 4, vec![(7, q(-1))]));
                } else {
                    rels.push(rel(2, 3, vec![(6, one()), (7, one())]));
                    rels.push(rel(2, 4, vec![(7, one())]));
                }
                StructureTensor::from_relations(7, &rels)
            }
        }
    }

    /// Dimension of a Cartan subalgebra, recorded per class rather than
    /// computed. Only defined for the three-dimensional classes.
    pub fn cartan_dimension(&self) -> Option<usize> {
        match self {
            AlgebraClass::Abelian3 | AlgebraClass::A31 => Some(3),
            AlgebraClass::A21A1 => Some(2),
            AlgebraClass::A32
            | AlgebraClass::A33
            | AlgebraClass::A34(_)
            | AlgebraClass::A35(_)
            | AlgebraClass::Sl2R
            | AlgebraClass::So3 => Some(1),
            AlgebraClass::GF | AlgebraClass::GE => None,
        }
    }

    /// Every three-dimensional class, with representative parameters for the
    /// two families.
    pub fn all3() -> Vec<AlgebraClass> {
        use crate::rational::qf;
        vec![
            AlgebraClass::Abelian3,
            AlgebraClass::A21A1,
            AlgebraClass::A31,
            AlgebraClass::A32,
            AlgebraClass::A33,
            AlgebraClass::A34(qf(1, 2)),
            AlgebraClass::A34(q(-1)),
            AlgebraClass::A35(q(0)),
            AlgebraClass::A35(q(1)),
            AlgebraClass::Sl2R,
            AlgebraClass::So3,
        ]
    }
}

impl fmt::Display for AlgebraClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parameter() {
            Some((k, v)) => write!(f, "{}({}={})", self.label(), k, fmt_q(v)),
            None => write!(f, "{}", self.label()),
        }
    }
}

/// Accepts `A3.4(a=1/2)`, `A3.4:a=1/2`, `A3.4 a=1/2` and bare labels.
impl FromStr for AlgebraClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(open) = s.find('(') {
            let inner = s[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Malformed(format!("unbalanced parameter in {s:?}")))?;
            return Self::parse(&s[..open], Some(inner));
        }
        if let Some((name, p)) = s.split_once([':', ' ']) {
            return Self::parse(name, Some(p.trim()));
        }
        Self::parse(s, None)
    }
}

/// The structure tensor of a named catalog algebra.
pub fn catalog(name: &str, param: Option<&str>) -> Result<StructureTensor> {
    Ok(AlgebraClass::parse(name, param)?.tensor())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::validate_lie;
    use crate::rational::qf;

    #[test]
    fn every_entry_is_a_lie_algebra() {
        let mut all = AlgebraClass::all3();
        all.push(AlgebraClass::GF);
        all.push(AlgebraClass::GE);
        for c in all {
            assert!(validate_lie(&c.tensor()).is_ok(), "{c}");
        }
    }

    #[test]
    fn sl2r_constants() {
        let c = catalog("sl2R", None).unwrap();
        assert_eq!(c.bracket_basis(0, 1), vec![q(1), q(0), q(0)]);
        assert_eq!(c.bracket_basis(1, 2), vec![q(0), q(0), q(1)]);
        assert_eq!(c.bracket_basis(0, 2), vec![q(0), q(2), q(0)]);
    }

    #[test]
    fn ge_constants() {
        let c = catalog("gE", None).unwrap();
        let mut e6_plus_e7 = vec![q(0); 7];
        e6_plus_e7[5] = q(1);
        e6_plus_e7[6] = q(1);
        assert_eq!(c.bracket_basis(1, 2), e6_plus_e7);
        assert_eq!(c.nonzero().len(), 2 * 8);
    }

    #[test]
    fn abelian_is_zero() {
        assert!(catalog("3A1", None).unwrap().is_abelian());
    }

    #[test]
    fn parameters() {
        assert_eq!(
            "A3.4(a=1/2)".parse::<AlgebraClass>().unwrap(),
            AlgebraClass::A34(qf(1, 2))
        );
        assert_eq!(
            "A3.5 b=2".parse::<AlgebraClass>().unwrap(),
            AlgebraClass::A35(q(2))
        );
        assert_eq!(AlgebraClass::A34(q(-1)).to_string(), "A3.4(a=-1)");
        assert!(matches!(catalog("A3.4", Some("a=2")), Err(Error::ParameterOutOfRange(_))));
        assert!(matches!(catalog("A3.4", Some("a=0")), Err(Error::ParameterOutOfRange(_))));
        assert!(matches!(catalog("A3.4", Some("a=1")), Err(Error::ParameterOutOfRange(_))));
        assert!(matches!(catalog("A3.5", Some("b=-1")), Err(Error::ParameterOutOfRange(_))));
        assert!(matches!(catalog("A3.4", None), Err(Error::ParameterOutOfRange(_))));
        assert!(matches!(catalog("sl2R", Some("a=1")), Err(Error::ParameterOutOfRange(_))));
        assert!(matches!(catalog("sl3", None), Err(Error::UnknownName(_))));
    }
}
