//! Rational points on diagonal quadratic forms.
//!
//! `solve_legendre` finds a nontrivial integer solution of `a x² + b y² = z²`
//! by Lagrange descent; the wrappers below turn it into isotropic vectors and
//! representations for the classifier's witness construction.

use num::bigint::{BigInt, Sign};
use num::{Integer, One, Signed, ToPrimitive, Zero};

use crate::rational::Q;

/// Prime factorization of a positive integer that fits in `u64`.
fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    for p in [2u64, 3, 5] {
        push(p, &mut n);
    }
    let mut d = 7u64;
    while d.saturating_mul(d) <= n && d < 1_000_000 {
        push(d, &mut n);
        d += 2;
    }
    if n > 1 {
        let mut rest = Vec::new();
        split_rho(n, &mut rest);
        rest.sort_unstable();
        for p in rest {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out.sort_unstable();
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn split_rho(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            split_rho(d, out);
            split_rho(n / d, out);
            return;
        }
        c += 1;
    }
}

/// `n = core · k²` with `core` squarefree (sign kept on `core`).
/// `None` if `|n|` does not fit in 64 bits.
fn squarefree_split(n: &BigInt) -> Option<(BigInt, BigInt)> {
    let abs = n.abs().to_u64()?;
    let mut core = BigInt::one();
    let mut k = BigInt::one();
    for (p, e) in factor_u64(abs) {
        if e % 2 == 1 {
            core *= p;
        }
        for _ in 0..e / 2 {
            k *= p;
        }
    }
    if n.sign() == Sign::Minus {
        core = -core;
    }
    Some((core, k))
}

/// A square root of `a` modulo the odd prime `p`, if one exists.
fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    // Tonelli–Shanks
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// A square root of `a` modulo the squarefree `m`, combined by CRT.
fn sqrt_mod_squarefree(a: &BigInt, m: u64) -> Option<BigInt> {
    let mut root = BigInt::zero();
    let mut modulus = BigInt::one();
    for (p, _) in factor_u64(m) {
        let ap = a.mod_floor(&BigInt::from(p)).to_u64().expect("reduced");
        let r = BigInt::from(sqrt_mod_prime(ap, p)?);
        // root ≡ old (mod modulus), root ≡ r (mod p)
        let pb = BigInt::from(p);
        let inv = mod_inverse(&modulus.mod_floor(&pb), &pb).expect("coprime moduli");
        let delta = ((&r - &root).mod_floor(&pb) * inv).mod_floor(&pb);
        root += &modulus * delta;
        modulus *= pb;
    }
    Some(root)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else {
        None
    }
}

/// A nontrivial solution of `a x² + b y² = z²` in integers, or `None` if
/// there is none (or the coefficients are too large to factor).
pub fn solve_legendre(a: &BigInt, b: &BigInt) -> Option<(BigInt, BigInt, BigInt)> {
    if a.is_zero() {
        return Some((BigInt::one(), BigInt::zero(), BigInt::zero()));
    }
    if b.is_zero() {
        return Some((BigInt::zero(), BigInt::one(), BigInt::zero()));
    }
    let (a0, fa) = squarefree_split(a)?;
    let (b0, fb) = squarefree_split(b)?;
    let (x, y, z) = descend(a0, b0, 0)?;
    Some((x * &fb, y * &fa, z * fa * fb))
}

fn descend(a: BigInt, b: BigInt, depth: usize) -> Option<(BigInt, BigInt, BigInt)> {
    let one = BigInt::one;
    if depth > 200 {
        return None;
    }
    if a.is_one() {
        return Some((one(), BigInt::zero(), one()));
    }
    if b.is_one() {
        return Some((BigInt::zero(), one(), one()));
    }
    if a.is_negative() && b.is_negative() {
        return None;
    }
    if (&a + &b).is_zero() {
        return Some((one(), one(), BigInt::zero()));
    }
    if a.abs() > b.abs() {
        let (x, y, z) = descend(b, a, depth + 1)?;
        return Some((y, x, z));
    }
    let m = b.abs().to_u64()?;
    let mut r = sqrt_mod_squarefree(&a, m)?;
    let mb = BigInt::from(m);
    if &r * 2 > mb {
        r -= &mb;
    }
    let t = (&r * &r - &a) / &b;
    if t.is_zero() {
        return Some((one(), BigInt::zero(), r));
    }
    let (t0, k) = squarefree_split(&t)?;
    let (x1, y1, z1) = descend(a.clone(), t0.clone(), depth + 1)?;
    let z = &z1 * &r + &a * &x1;
    let x = &z1 + &r * &x1;
    let y = t0 * y1 * k;
    Some((x, y, z))
}

/// `x = core · k²` with `core` a squarefree integer and `k` rational,
/// factoring numerator and denominator separately.
fn rational_core(x: &Q) -> Option<(BigInt, Q)> {
    let mut exps: std::collections::BTreeMap<u64, i32> = std::collections::BTreeMap::new();
    for (part, sign) in [(x.numer(), 1), (x.denom(), -1)] {
        for (p, e) in factor_u64(part.abs().to_u64()?) {
            *exps.entry(p).or_insert(0) += sign * e as i32;
        }
    }
    let mut core = BigInt::one();
    let mut k = Q::one();
    for (p, e) in exps {
        let pq = Q::from_integer(BigInt::from(p));
        if e.rem_euclid(2) == 1 {
            core *= p;
        }
        // x = core·k² needs p^(e − [e odd]) = k², so k gets p^floor(e/2)
        k *= num::pow::Pow::pow(&pq, e.div_euclid(2));
    }
    if x.is_negative() {
        core = -core;
    }
    Some((core, k))
}

/// A nonzero `v` with `Σ d_i v_i² = 0`, if one exists.
pub fn isotropic_vector(d: &[Q; 3]) -> Option<[Q; 3]> {
    let one = || Q::one();
    let zero = || Q::zero();
    if let Some(i) = d.iter().position(Zero::is_zero) {
        let mut v = [zero(), zero(), zero()];
        v[i] = one();
        return Some(v);
    }
    // d1 x² + d2 y² + d3 z² = 0  <=>  A x² + B y² = z² with A = −d1/d3, B = −d2/d3,
    // and A x² = a (ka x)² with a squarefree
    let (a, ka) = rational_core(&-(&d[0] / &d[2]))?;
    let (b, kb) = rational_core(&-(&d[1] / &d[2]))?;
    let (x, y, z) = solve_legendre(&a, &b)?;
    let v = [
        Q::from_integer(x) / ka,
        Q::from_integer(y) / kb,
        Q::from_integer(z),
    ];
    debug_assert!(v.iter().any(|c| !c.is_zero()));
    Some(v)
}

/// Rationals `(x, y)` with `x² + y² = m`, if they exist.
pub fn sum_of_two_squares(m: &Q) -> Option<(Q, Q)> {
    if m.is_negative() {
        return None;
    }
    if m.is_zero() {
        return Some((Q::zero(), Q::zero()));
    }
    let [x, y, z] = isotropic_vector(&[Q::one(), Q::one(), -m.clone()])?;
    Some((x / &z, y / z))
}

/// A rational vector with `Σ d_i v_i² = r`; the first of
/// [`representations`].
pub fn represent(d: &[Q; 3], r: &Q) -> Option<[Q; 3]> {
    representations(d, r).next()
}

/// Rational vectors with `Σ d_i v_i² = r`, found by fixing one coordinate
/// at a small value and solving the remaining binary problem exactly.
/// Coefficients are first reduced to squarefree integers, which keeps the
/// solutions small. For definite forms the fixed value is drawn from the
/// interval where the remaining problem can be solvable.
pub fn representations<'a>(d: &'a [Q; 3], r: &'a Q) -> impl Iterator<Item = [Q; 3]> + 'a {
    let reduced = if d.iter().any(Zero::is_zero) || r.is_zero() {
        None
    } else {
        d.iter()
            .chain(std::iter::once(r))
            .map(rational_core)
            .collect::<Option<Vec<_>>>()
    };
    reduced.into_iter().flat_map(move |cores| {
        let (c, k): (Vec<Q>, Vec<Q>) = cores
            .into_iter()
            .map(|(core, k)| (Q::from_integer(core), k))
            .unzip();
        let definite = c.iter().all(Signed::is_positive) || c.iter().all(Signed::is_negative);
        let (c_split, k_split) = (c.clone(), k.clone());
        (1..=64i64).flat_map(move |den| {
            let (c, k) = (c.clone(), k.clone());
            (0..3).flat_map(move |fixed| {
                let reach = if definite {
                    (c[3].to_f64().unwrap_or(0.0) / c[fixed].to_f64().unwrap_or(1.0)).sqrt()
                } else {
                    12.0
                };
                let top = (reach.min(12.0) * den as f64).floor() as i64;
                let (c, k) = (c.clone(), k.clone());
                (-top..=top)
                    .filter(move |num| num.gcd(&den) == 1 || (*num == 0 && den == 1))
                    .filter_map(move |num| {
                        let last = Q::new(num.into(), den.into());
                        let (a, b) = ((fixed + 1) % 3, (fixed + 2) % 3);
                        let rest = &c[3] - &c[fixed] * &last * &last;
                        if rest.is_zero() {
                            return None;
                        }
                        let [x, y, z] = isotropic_vector(&[c[a].clone(), c[b].clone(), -rest])?;
                        if z.is_zero() {
                            return None;
                        }
                        let mut u = [Q::zero(), Q::zero(), Q::zero()];
                        u[a] = x / &z;
                        u[b] = y / &z;
                        u[fixed] = last;
                        Some(std::array::from_fn(|i| &u[i] * &k[3] / &k[i]))
                    })
            })
        })
        .chain(split_representations(c_split).map(move |u| {
            std::array::from_fn(|i| &u[i] * &k_split[3] / &k_split[i])
        }))
    })
}

/// Solutions of `c0 x² + c1 y² + c2 z² = c3` through an integer `t`
/// represented both as `c0 x² + c1 y²` and as `c3 w² − c2 z²`.
fn split_representations(c: Vec<Q>) -> impl Iterator<Item = [Q; 3]> {
    (1..=20_000i64)
        .flat_map(|t| [t, -t])
        .filter_map(move |t| {
            let t = Q::from_integer(t.into());
            let [x, y, s1] = isotropic_vector(&[c[0].clone(), c[1].clone(), -t.clone()])?;
            let [w, z, s2] = isotropic_vector(&[c[3].clone(), -c[2].clone(), -t])?;
            if s1.is_zero() || s2.is_zero() || w.is_zero() {
                return None;
            }
            // c0 (x/s1)² + c1 (y/s1)² = t = c3 (w/s2)² − c2 (z/s2)²
            let scale = &s2 / (&s1 * &w);
            Some([x * &scale, y * &scale, z / w])
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn check(a: i64, b: i64) -> bool {
        let (ab, bb) = (BigInt::from(a), BigInt::from(b));
        match solve_legendre(&ab, &bb) {
            Some((x, y, z)) => {
                assert!(!(x.is_zero() && y.is_zero() && z.is_zero()));
                assert_eq!(&ab * &x * &x + &bb * &y * &y, &z * &z, "a={a} b={b}");
                true
            }
            None => false,
        }
    }

    /// Independent brute force over a small box.
    fn brute(a: i64, b: i64) -> bool {
        let r = 40;
        for x in -r..=r {
            for y in -r..=r {
                let s = a * x * x + b * y * y;
                if (x, y) == (0, 0) || s < 0 {
                    continue;
                }
                let z = (s as f64).sqrt().round() as i64;
                if z * z == s {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn legendre_agrees_with_brute_force() {
        for a in -12..=12 {
            for b in -12..=12 {
                if a == 0 || b == 0 {
                    continue;
                }
                let solved = check(a, b);
                if brute(a, b) {
                    assert!(solved, "missed a solution for a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn legendre_known_cases() {
        assert!(check(1, 1));
        assert!(!check(-1, -1));
        assert!(!check(3, 3) && !check(-1, 3)); // x²+y² ≠ 3z² / 3y² ≠ z²+x²
        assert!(check(2, 7));
        assert!(check(210, 79)); // 210 + 79 = 17²
        assert!(check(-1, 2));
    }

    #[test]
    fn isotropic_and_representation() {
        let v = isotropic_vector(&[q(1), q(1), q(-2)]).unwrap();
        assert_eq!(&v[0] * &v[0] + &v[1] * &v[1] - q(2) * &v[2] * &v[2], q(0));
        assert!(isotropic_vector(&[q(1), q(1), q(1)]).is_none());
        let (x, y) = sum_of_two_squares(&qf(25, 9)).unwrap();
        assert_eq!(&x * &x + &y * &y, qf(25, 9));
        assert!(sum_of_two_squares(&q(3)).is_none());
        let d = [qf(-1, 2), q(-3), qf(-7, 5)];
        let target = q(-2);
        if let Some(v) = represent(&d, &target) {
            let val: Q = (0..3).map(|i| &d[i] * &v[i] * &v[i]).sum();
            assert_eq!(val, target);
        }
        let w = represent(&[q(1), q(1), q(1)], &q(6)).unwrap();
        assert_eq!(w.iter().map(|x| x * x).sum::<Q>(), q(6));
        // 7 = 8·0 + 7 is not a sum of three rational squares
        assert!(represent(&[q(1), q(1), q(1)], &q(7)).is_none());
    }

    #[test]
    fn isotropic_with_large_denominators() {
        // 2·313·349093² does not fit a single 64-bit factorization once
        // numerator and denominator are multiplied together
        let m = Q::new(2080728225u64.into(), 76288067578274u64.into());
        let (x, y) = sum_of_two_squares(&m).expect("2·313 is a sum of two squares");
        assert_eq!(&x * &x + &y * &y, m);
        let (core, k) = rational_core(&qf(-72, 50)).unwrap();
        assert_eq!((core.clone(), &k * &k * Q::from_integer(core)), (BigInt::from(-1), qf(-36, 25)));
    }

    #[test]
    fn factorization() {
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(1_000_000_007 * 998_244_353), vec![(998_244_353, 1), (1_000_000_007, 1)]);
        assert_eq!(sqrt_mod_prime(10, 13).map(|r| r * r % 13), Some(10));
    }
}
