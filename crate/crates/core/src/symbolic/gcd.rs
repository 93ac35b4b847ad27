//! Multivariate polynomial gcd over the rationals.
//!
//! Recursive primitive PRS: pick a main variable, split off the content with
//! respect to it (a gcd in one fewer variable), then run the primitive
//! pseudo-remainder sequence on the primitive parts. Results are primitive
//! with a positive leading coefficient, so constants are reported as `1`.

use super::poly::{coefficient_content, Poly};
use super::var::Var;
use super::Rational;
use super::sample::Sampler;
use num_traits::{One, Signed, Zero};

pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = ma.gcd(&mb);
    if a.is_monomial() || b.is_monomial() {
        return Poly::term(Rational::one(), mono);
    }
    let a = a.div_exact(&Poly::term(Rational::one(), ma)).expect("monomial content divides");
    let b = b.div_exact(&Poly::term(Rational::one(), mb)).expect("monomial content divides");
    let g = gcd_primitive(&a.primitive(), &b.primitive());
    g.mul_term(&mono, &Rational::one())
}

/// Both inputs primitive, nonzero, free of monomial content.
fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.clone();
    }
    if a.div_exact(b).is_some() {
        return b.clone();
    }
    if b.div_exact(a).is_some() {
        return a.clone();
    }
    let va = a.vars();
    let vb = b.vars();
    // A variable present in only one argument: the gcd divides every
    // coefficient with respect to it.
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd_with_coefficients(b, a, v);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd_with_coefficients(a, b, v);
    }
    if coprime_by_images(a, b, &va) {
        return Poly::one();
    }
    let main = *va
        .iter()
        .min_by_key(|&&v| (a.degree_in(v) + b.degree_in(v), std::cmp::Reverse(v)))
        .expect("nonconstant polynomial has a variable");
    univariate_gcd(a, b, main)
}

fn gcd_with_coefficients(other: &Poly, p: &Poly, v: Var) -> Poly {
    let mut g = other.clone();
    let mut coeffs = p.coefficients_in(v);
    coeffs.sort_by_key(|c| c.len());
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

/// Sufficient test for coprimality. For each variable `v`, the other
/// variables are fixed at a point where both leading coefficients in `v`
/// survive; the gcd's degree in `v` is then at most the degree of the gcd of
/// the univariate images. If every image gcd is constant, so is the gcd.
fn coprime_by_images(a: &Poly, b: &Poly, vars: &std::collections::BTreeSet<Var>) -> bool {
    let mut sampler = Sampler::new(0x6cd);
    for &v in vars {
        let ca = a.coefficients_in(v);
        let cb = b.coefficients_in(v);
        let others: std::collections::BTreeSet<Var> = vars.iter().copied().filter(|&w| w != v).collect();
        let image = (0..3).find_map(|_| {
            let point = sampler.point(others.iter().copied());
            let ia: Vec<Rational> = ca.iter().map(|c| c.eval(&point).expect("all variables bound")).collect();
            let ib: Vec<Rational> = cb.iter().map(|c| c.eval(&point).expect("all variables bound")).collect();
            let lead_ok = |u: &[Rational]| u.last().map(|c| !c.is_zero()).unwrap_or(false);
            (lead_ok(&ia) && lead_ok(&ib)).then_some((ia, ib))
        });
        match image {
            Some((ia, ib)) => {
                if rational_gcd_degree(ia, ib) != 0 {
                    return false;
                }
            }
            None => return false,
        }
    }
    true
}

/// Degree of the gcd of two univariate polynomials over the rationals
/// (coefficients in increasing degree).
fn rational_gcd_degree(mut f: Vec<Rational>, mut g: Vec<Rational>) -> usize {
    let strip = |u: &mut Vec<Rational>| {
        while u.last().map(|c| c.is_zero()).unwrap_or(false) {
            u.pop();
        }
    };
    strip(&mut f);
    strip(&mut g);
    while !g.is_empty() {
        // f mod g
        while f.len() >= g.len() && !f.is_empty() {
            let q = f.last().expect("nonempty") / g.last().expect("nonempty");
            let shift = f.len() - g.len();
            for (i, c) in g.iter().enumerate() {
                f[i + shift] -= &q * c;
            }
            strip(&mut f);
        }
        std::mem::swap(&mut f, &mut g);
    }
    f.len().saturating_sub(1)
}

type Uni = Vec<Poly>;

fn trim(mut u: Uni) -> Uni {
    while u.len() > 1 && u.last().map(Poly::is_zero).unwrap_or(false) {
        u.pop();
    }
    u
}

fn uni_is_zero(u: &Uni) -> bool {
    u.iter().all(Poly::is_zero)
}

fn uni_content(u: &Uni) -> Poly {
    let mut coeffs: Vec<&Poly> = u.iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| c.len());
    let mut g = match coeffs.first() {
        Some(c) => c.primitive(),
        None => return Poly::one(),
    };
    for c in &coeffs[1..] {
        if g.is_constant() {
            return Poly::one();
        }
        g = gcd(&g, c);
    }
    g
}

fn uni_primitive(u: &Uni) -> Uni {
    let c = uni_content(u);
    let mut out: Uni = u
        .iter()
        .map(|p| p.div_exact(&c).expect("content divides coefficients"))
        .collect();
    let cc = coefficient_content(out.iter().flat_map(|p| p.terms().iter().map(|(_, c)| c)));
    let lead_negative = out
        .iter()
        .rev()
        .find(|p| !p.is_zero())
        .map(|p| p.leading_coeff().is_negative())
        .unwrap_or(false);
    let s = if lead_negative { -cc.recip() } else { cc.recip() };
    for p in out.iter_mut() {
        *p = p.scale(&s);
    }
    trim(out)
}

/// Pseudo-remainder of `f` by `g` (both in the main variable).
fn prem(f: &Uni, g: &Uni) -> Uni {
    let dg = g.len() - 1;
    let lg = &g[dg];
    let mut r = f.clone();
    while r.len() > dg && !uni_is_zero(&r) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - dg;
        let mut next: Uni = r.iter().map(|c| c.mul(lg)).collect();
        for (i, gc) in g.iter().enumerate() {
            next[i + shift] = next[i + shift].sub(&gc.mul(&lr));
        }
        next.pop();
        r = trim(next);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    r
}

fn univariate_gcd(a: &Poly, b: &Poly, v: Var) -> Poly {
    let ua = trim(a.coefficients_in(v));
    let ub = trim(b.coefficients_in(v));
    let ca = uni_content(&ua);
    let cb = uni_content(&ub);
    let content = gcd(&ca, &cb);
    let (mut f, mut g) = (uni_primitive(&ua), uni_primitive(&ub));
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        if g.len() == 1 {
            // Nonzero constant in v: primitive parts are coprime.
            return content;
        }
        let r = prem(&f, &g);
        if uni_is_zero(&r) {
            break;
        }
        f = g;
        g = uni_primitive(&r);
    }
    let g = Poly::from_coefficients(v, &g);
    g.mul(&content).primitive()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Poly {
        Poly::var(Var::x(i))
    }

    fn c(k: i64) -> Poly {
        Poly::from_int(k)
    }

    #[test]
    fn recovers_common_factor() {
        let g = &(&x(1) * &x(2)) + &c(3);
        let a = &g * &(&x(1) - &x(3));
        let b = &g * &(&(&x(2) * &x(2)) + &x(1));
        assert_eq!(gcd(&a, &b), g);
    }

    #[test]
    fn coprime_gives_one() {
        let a = &x(1) + &x(2);
        let b = &x(1) - &x(2);
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn monomial_factor_is_kept() {
        let a = &(&x(1) * &x(1)) * &(&x(2) + &c(1));
        let b = &x(1) * &(&x(2) + &c(1));
        assert_eq!(gcd(&a, &b), b);
    }

    #[test]
    fn gcd_is_normalized_primitive() {
        let a = (&x(1) + &c(1)).scale(&Rational::new(6.into(), 5.into()));
        let b = (&(&x(1) + &c(1)) * &x(2)).scale(&Rational::from_integer((-4).into()));
        assert_eq!(gcd(&a, &b), &x(1) + &c(1));
    }

    #[test]
    fn variable_in_one_argument_only() {
        let g = &x(1) + &x(2);
        let a = &g * &(&x(3) + &c(2));
        let b = &g * &(&x(1) + &c(5));
        assert_eq!(gcd(&a, &b), g);
    }
}
