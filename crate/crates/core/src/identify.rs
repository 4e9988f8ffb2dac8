//! Mubarakzyanov class of a real three-dimensional Lie algebra, with an
//! explicit rational basis change onto the catalog form.

use num::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vec, unit_vec, zero_vec, Inertia, Matrix, Subspace, Vector};
use crate::liealg::{
    center, change_basis, derived_series, ensure_lie, is_unimodular, killing_form,
    lower_central_series, nilpotency_degree, solvability_degree, AlgebraClass, BasisChange,
    StructureTensor,
};
use crate::quadform::{isotropic_vector, representations, sum_of_two_squares};
use crate::rational::{sqrt_q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSignature {
    pub dim: usize,
    pub dim_derived: usize,
    pub dim_center: usize,
    pub unimodular: bool,
    pub solv_degree: Option<usize>,
    pub nilp_degree: Option<usize>,
    pub killing_rank: usize,
    pub killing_signature: Inertia,
    /// `tr(A)² / det(A)` for `A = ad_x` restricted to a two-dimensional
    /// derived algebra, `x` outside it.
    #[serde(serialize_with = "ser_opt_q")]
    pub adjoint_parameter: Option<Q>,
}

fn ser_opt_q<S: serde::Serializer>(v: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.serialize_some(&crate::rational::fmt_q(q)),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Identification {
    pub class: AlgebraClass,
    /// `change_basis(c, witness) == class.tensor()`.
    pub witness: BasisChange,
}

fn check_dim(c: &StructureTensor) -> Result<()> {
    if c.dim() != 3 {
        return Err(Error::WrongDimension {
            expected: 3,
            got: c.dim(),
        });
    }
    Ok(())
}

fn derived(c: &StructureTensor) -> Subspace {
    derived_series(c)
        .get(1)
        .cloned()
        .unwrap_or_else(|| Subspace::full(c.dim()))
}

pub fn signature(c: &StructureTensor) -> Result<InvariantSignature> {
    check_dim(c)?;
    let d = derived(c);
    let k = killing_form(c);
    let adjoint_parameter = if d.dim() == 2 {
        let a = restricted_ad(c, &d);
        Some(a.trace() * a.trace() / a.determinant())
    } else {
        None
    };
    Ok(InvariantSignature {
        dim: 3,
        dim_derived: d.dim(),
        dim_center: center(c).dim(),
        unimodular: is_unimodular(c).unimodular,
        solv_degree: solvability_degree(c),
        nilp_degree: nilpotency_degree(c),
        killing_rank: k.rank,
        killing_signature: k.signature,
        adjoint_parameter,
    })
}

/// First standard basis vector outside `d`.
fn outside(d: &Subspace) -> Vector {
    (0..d.ambient())
        .map(|i| unit_vec(d.ambient(), i))
        .find(|v| !d.contains(v))
        .expect("proper subspace")
}

/// Matrix of `ad_x` on the echelon basis of the two-dimensional ideal `d`,
/// for the first standard `x ∉ d`.
fn restricted_ad(c: &StructureTensor, d: &Subspace) -> Matrix {
    let x = outside(d);
    let m = d.dim();
    let mut a = Matrix::zeros(m, m);
    for (j, v) in d.basis().iter().enumerate() {
        let coords = d.coordinates(&c.bracket(&x, v)).expect("derived algebra is an ideal");
        for (i, val) in coords.into_iter().enumerate() {
            a[(i, j)] = val;
        }
    }
    a
}

fn combine(basis: &[Vector], coords: &[Q]) -> Vector {
    let mut out = zero_vec(basis[0].len());
    for (b, w) in basis.iter().zip(coords) {
        axpy(&mut out, w, b);
    }
    out
}

/// A vector `Σ a_i b_i / t` with small integers `a_i` and `K(v) = −2`, where
/// `K(Σ a_i b_i) = −2 t²` for rational `t`.
fn small_unit(k: &Matrix, basis: &[Vector], bound: i64) -> Option<Vector> {
    let m = basis.len();
    let kb: Vec<Vector> = basis.iter().map(|b| k.mul_vec(b)).collect();
    let gram: Vec<Vec<Q>> = basis.iter().map(|b| kb.iter().map(|x| dot(b, x)).collect()).collect();
    for r in 1..=bound {
        let side = (2 * r + 1) as usize;
        for idx in 0..side.pow(m as u32) {
            let coords: Vec<i64> = (0..m)
                .map(|i| (idx / side.pow(i as u32) % side) as i64 - r)
                .collect();
            if coords.iter().all(|a| a.abs() < r) {
                continue;
            }
            let mut value = Q::zero();
            for i in 0..m {
                for j in 0..m {
                    value += &gram[i][j] * Q::from_integer((coords[i] * coords[j]).into());
                }
            }
            let half = -value / Q::from_integer(2.into());
            if let Some(t) = sqrt_q(&half).filter(|t| !t.is_zero()) {
                let qs: Vec<Q> = coords.iter().map(|&a| Q::from_integer(a.into())).collect();
                return Some(scaled(&combine(basis, &qs), &t.recip()));
            }
        }
    }
    None
}

/// `v` scaled to coprime integer coordinates.
fn primitive(v: &[Q]) -> Vector {
    use num::Integer;
    let den = v.iter().fold(num::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num::BigInt> = v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(num::BigInt::from(0), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Q::from_integer(x / &g)).collect()
}

fn scaled(v: &[Q], s: &Q) -> Vector {
    v.iter().map(|x| x * s).collect()
}

/// Class and witness of a three-dimensional Lie algebra.
pub fn identify3(c: &StructureTensor) -> Result<Identification> {
    check_dim(c)?;
    ensure_lie(c)?;
    let d = derived(c);
    let (class, rows) = match d.dim() {
        0 => (
            AlgebraClass::Abelian3,
            (0..3).map(|i| unit_vec(3, i)).collect(),
        ),
        1 => rank_one(c, &d),
        2 => rank_two(c, &d)?,
        _ => simple(c)?,
    };
    let witness = BasisChange::from_rows(rows)
        .map_err(|_| Error::Internal(format!("degenerate witness for {class}")))?;
    if change_basis(c, &witness)? != class.tensor() {
        return Err(Error::Internal(format!("witness does not reach {class}")));
    }
    Ok(Identification { class, witness })
}

fn rank_one(c: &StructureTensor, d: &Subspace) -> (AlgebraClass, Vec<Vector>) {
    let w = d.basis()[0].clone();
    let nilpotent = lower_central_series(c).last().is_some_and(Subspace::is_zero);
    if nilpotent {
        // [x, y] = w spans the derived algebra
        for i in 0..3 {
            for j in i + 1..3 {
                let br = c.bracket_basis(i, j);
                if !is_zero_vec(&br) {
                    return (
                        AlgebraClass::A31,
                        vec![br, unit_vec(3, i), unit_vec(3, j)],
                    );
                }
            }
        }
        unreachable!("non-abelian algebra has a nonzero bracket");
    }
    // [x, w] = μ w with μ ≠ 0 for some basis vector x
    let (x, mu) = (0..3)
        .map(|i| unit_vec(3, i))
        .find_map(|x| {
            let mu = d.coordinates(&c.bracket(&x, &w)).expect("ideal")[0].clone();
            (!mu.is_zero()).then_some((x, mu))
        })
        .expect("w is not central");
    let y = scaled(&x, &-mu.recip());
    let z = center(c).basis()[0].clone();
    (AlgebraClass::A21A1, vec![w, y, z])
}

fn rank_two(c: &StructureTensor, d: &Subspace) -> Result<(AlgebraClass, Vec<Vector>)> {
    let x = outside(d);
    let a = restricted_ad(c, d);
    let basis = d.basis();
    let tr = a.trace();
    let det = a.determinant();
    let disc = &tr * &tr - Q::from_integer(4.into()) * &det;
    let two = Q::from_integer(2.into());
    if disc.is_zero() {
        let mu = &tr / &two;
        let e3 = scaled(&x, &-mu.recip());
        // B: v ↦ [v, e3] = A v / μ on the derived algebra
        let n = a.scale(&mu.recip()).sub(&Matrix::identity(2));
        if n.is_zero() {
            return Ok((
                AlgebraClass::A33,
                vec![basis[0].clone(), basis[1].clone(), e3],
            ));
        }
        let w2 = (0..2)
            .map(|i| unit_vec(2, i))
            .find(|v| !is_zero_vec(&n.mul_vec(v)))
            .expect("N is nonzero");
        let w1 = n.mul_vec(&w2);
        return Ok((
            AlgebraClass::A32,
            vec![combine(basis, &w1), combine(basis, &w2), e3],
        ));
    }
    if disc.is_positive() {
        let Some(root) = sqrt_q(&disc) else {
            if tr.is_zero() {
                return Err(Error::NoRationalWitness {
                    class: AlgebraClass::A34(Q::from_integer((-1).into())).to_string(),
                });
            }
            return Err(Error::ParameterNotRational { class: "A3.4".into() });
        };
        let l1 = (&tr + &root) / &two;
        let l2 = (&tr - &root) / &two;
        let (m1, m2) = if l1.abs() >= l2.abs() { (l1, l2) } else { (l2, l1) };
        let eig = |mu: &Q| {
            let v = a.sub(&Matrix::identity(2).scale(mu)).nullspace();
            combine(basis, &v[0])
        };
        let class = AlgebraClass::A34(&m2 / &m1);
        return Ok((class, vec![eig(&m1), eig(&m2), scaled(&x, &-m1.recip())]));
    }
    let p = &tr / &two;
    let Some(qq) = sqrt_q(&(-disc / Q::from_integer(4.into()))) else {
        if p.is_zero() {
            return Err(Error::NoRationalWitness {
                class: AlgebraClass::A35(Q::zero()).to_string(),
            });
        }
        return Err(Error::ParameterNotRational { class: "A3.5".into() });
    };
    // e3 = s x with s = ∓1/q so that v ↦ [v, e3] has eigenvalues b ± i, b ≥ 0
    let s = if p.is_negative() { qq.recip() } else { -qq.recip() };
    let b = p.abs() / &qq;
    let bmap = a.scale(&-s.clone());
    let m = bmap.sub(&Matrix::identity(2).scale(&b));
    let w1 = unit_vec(2, 0);
    let w2: Vector = m.mul_vec(&w1).into_iter().map(|v| -v).collect();
    Ok((
        AlgebraClass::A35(b),
        vec![combine(basis, &w1), combine(basis, &w2), scaled(&x, &s)],
    ))
}

fn simple(c: &StructureTensor) -> Result<(AlgebraClass, Vec<Vector>)> {
    let k = killing_form(c);
    let (p, diag) = k.matrix.congruence_diagonalize();
    let d3 = [diag[0].clone(), diag[1].clone(), diag[2].clone()];
    // x = pᵀ y turns K(x, x) into Σ d_i y_i²
    let lift = |y: &[Q]| p.transpose().mul_vec(y);
    if k.is_definite() {
        let none = || Error::NoRationalWitness { class: "so3".into() };
        let minus_two = Q::from_integer((-2).into());
        // K(f1) = −2, then f2 ∈ f1^⊥ with K(f2) = −2 and f3 = [f1, f2]
        let units: Vec<Vector> = (0..3).map(|i| unit_vec(3, i)).collect();
        let candidates = small_unit(&k.matrix, &units, 8)
            .into_iter()
            .chain(representations(&d3, &minus_two).take(64).map(|y| lift(&y)));
        for f1 in candidates {
            let kf1 = k.matrix.mul_vec(&f1);
            let perp = Matrix::from_rows(vec![kf1])?.nullspace();
            let (p0, p1) = (primitive(&perp[0]), primitive(&perp[1]));
            if let Some(f2) = small_unit(&k.matrix, &[p0.clone(), p1.clone()], 24) {
                let f3 = c.bracket(&f1, &f2);
                return Ok((AlgebraClass::So3, vec![f1, f2, f3]));
            }
            // f2 = s w + t [f1, w] with s² + t² = −2 / K(w)
            for j in [0, 1, -1, 2, -2, 3, -3] {
                let mut w = p0.clone();
                axpy(&mut w, &Q::from_integer(j.into()), &p1);
                let w = primitive(&w);
                let jw = c.bracket(&f1, &w);
                let kw = dot(&w, &k.matrix.mul_vec(&w));
                let Some((s, t)) = sum_of_two_squares(&(&minus_two / kw)) else {
                    continue;
                };
                let mut f2 = scaled(&w, &s);
                axpy(&mut f2, &t, &jw);
                let f3 = c.bracket(&f1, &f2);
                return Ok((AlgebraClass::So3, vec![f1, f2, f3]));
            }
        }
        return Err(none());
    }
    let none = || Error::NoRationalWitness { class: "sl2R".into() };
    let e = lift(&isotropic_vector(&d3).ok_or_else(none)?);
    // [[e, z], e] = 2e  <=>  ad_e² z = −2e
    let ade = c.ad(&e);
    let ade2 = ade.mul(&ade);
    let target: Vector = e.iter().map(|v| v * Q::from_integer((-2).into())).collect();
    let z = solve(&ade2, &target).ok_or_else(none)?;
    let h = c.bracket(&e, &z);
    // [e, f] = h and [h, f] = −2f
    let adh = shift(&c.ad(&h), &Q::from_integer(2.into()));
    let mut stacked = ade.to_rows();
    stacked.extend(adh.to_rows());
    let mut rhs = h.clone();
    rhs.extend(zero_vec(3));
    let f = solve(&Matrix::from_rows(stacked)?, &rhs).ok_or_else(none)?;
    let half = Q::new(1.into(), 2.into());
    Ok((
        AlgebraClass::Sl2R,
        vec![f, scaled(&h, &half), e.iter().map(|v| -v).collect()],
    ))
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One solution of `m z = rhs`, if any.
fn solve(m: &Matrix, rhs: &[Q]) -> Option<Vector> {
    let n = m.cols();
    let rows = (0..m.rows())
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let aug = Matrix::from_rows(rows).ok()?;
    let (r, pivots) = aug.rref();
    if pivots.contains(&n) {
        return None;
    }
    let mut z = zero_vec(n);
    for (row, &pc) in pivots.iter().enumerate() {
        z[pc] = r[(row, n)].clone();
    }
    Some(z)
}

fn shift(m: &Matrix, s: &Q) -> Matrix {
    let mut out = m.clone();
    for i in 0..out.rows() {
        out[(i, i)] += s;
    }
    out
}

/// A basis change `u` with `change_basis(c1, u) == c2`, or `None` when the
/// algebras are not isomorphic.
pub fn are_isomorphic(c1: &StructureTensor, c2: &StructureTensor) -> Result<Option<BasisChange>> {
    check_dim(c1)?;
    check_dim(c2)?;
    let a = identify3(c1)?;
    let b = identify3(c2)?;
    if a.class != b.class {
        return Ok(None);
    }
    let u = a.witness.then(&b.witness.inverse());
    debug_assert!(change_basis(c1, &u).is_ok_and(|t| &t == c2));
    Ok(Some(u))
}
