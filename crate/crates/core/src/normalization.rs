//! Elimination of group parameters from the lifted invariants.
//!
//! Each round re-scans every remaining lifted invariant and picks one
//! normalization equation:
//!
//! * tier 0: `I_j` affine in an unsolved `t_k`, coefficient free of all
//!   parameters; solved from `I_j = 0`;
//! * tier 1: the same with a parameter-dependent coefficient;
//! * tier 2: `I_j = c v_k^(+-1) R` with `R` free of `v_k`; solved from
//!   `I_j = 1`;
//! * tier 3: `I_j = c v_k^m R` with `|m| > 1` and `R` parameter free; the
//!   unit cannot be solved rationally, so `I_j` is set aside for the
//!   exponent lattice.
//!
//! Ties are broken by parameter index, then equation index. Once nothing
//! applies, remaining expressions of the shape `c v^w R` are combined along
//! integer relations among their exponent vectors `w` so the units cancel.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::LieAlgebra;
use crate::exp_adjoint::LiftedInvariantSet;
use crate::symbolic::linalg::{self, RatMatrix};
use crate::symbolic::sample::Sampler;
use crate::symbolic::{Monomial, Poly, Rational, RationalExpr, Var, VarKind, VarNames};
use crate::verifier;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationStep {
    /// 1-based index `j` of the lifted invariant `I_j` that was normalized.
    pub equation_index: usize,
    pub solved_variable: Var,
    pub constant: Rational,
    pub solution: RationalExpr,
    /// Polynomials assumed nonzero for the solution to be valid.
    pub assumptions: Vec<Poly>,
}

/// An integer relation `prod_l I_{equations[l]}^{exponents[l]}` whose units
/// cancel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMove {
    pub equations: Vec<usize>,
    pub exponents: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NormalizationTrace {
    pub steps: Vec<NormalizationStep>,
    /// `(equation, unit)` pairs set aside for the lattice stage.
    pub deferred: Vec<(usize, Var)>,
    /// Expressions left after all steps, keyed by equation index.
    pub residual_exprs: Vec<(usize, RationalExpr)>,
    pub lattice_moves: Vec<LatticeMove>,
    /// Rank of the exponent matrix of the lattice stage.
    pub lattice_rank: usize,
    /// True when the loop ended with parameters still unsolved.
    pub stalled: bool,
}

#[derive(Clone, Debug)]
pub struct InvariantBasis {
    pub algebra: LieAlgebra,
    pub invariants: Vec<RationalExpr>,
    pub trace: NormalizationTrace,
    /// Number of parameters eliminated: solved parameters plus the lattice
    /// rank.
    pub rho: usize,
    pub expected_count: usize,
    pub certified: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct NormalizeOptions {
    pub max_steps: usize,
    pub seed: u64,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            max_steps: 1000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Action {
    Solve { solution: RationalExpr },
    Defer,
}

/// A normalization equation proposed by [`choose_step`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub tier: u8,
    /// 0-based position in the expression list.
    pub equation: usize,
    pub variable: Var,
    pub constant: Rational,
    pub assumptions: Vec<Poly>,
    action: Action,
}

impl Candidate {
    pub fn solution(&self) -> Option<&RationalExpr> {
        match &self.action {
            Action::Solve { solution } => Some(solution),
            Action::Defer => None,
        }
    }

    pub fn is_deferral(&self) -> bool {
        self.action == Action::Defer
    }
}

/// Nonzero witness values keyed by variable.
pub struct Witness {
    seed: u64,
    cache: HashMap<Var, Rational>,
}

impl Witness {
    pub fn new(seed: u64) -> Self {
        Witness {
            seed,
            cache: HashMap::new(),
        }
    }

    pub fn nonzero(&mut self, p: &Poly) -> bool {
        for v in p.vars() {
            let seed = self.seed;
            self.cache.entry(v).or_insert_with(|| Sampler::keyed(seed, v));
        }
        p.eval(&self.cache).map(|x| !x.is_zero()).unwrap_or(false)
    }
}

/// Parameter index of a group parameter or unit.
fn param_of(v: Var) -> Option<u32> {
    v.is_param().then_some(v.index)
}

/// Drops unit factors (always nonzero) and scalars from an assumption.
fn strip_units(p: &Poly) -> Poly {
    let m = p.monomial_content();
    let units = Monomial::from_powers(m.powers().iter().filter(|(v, _)| v.kind == VarKind::ExpUnit).copied());
    p.div_exact(&Poly::term(Rational::one(), units))
        .expect("monomial content divides")
        .primitive()
}

fn assumption_list(ps: &[&Poly]) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::new();
    for p in ps {
        let s = strip_units(p);
        if !s.is_constant() && !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// Splits `e = v^m * R` with `R` free of `v`, if `v` enters as a monomial
/// factor.
fn split_unit(e: &RationalExpr, v: Var) -> Option<(i64, RationalExpr)> {
    let (n, d) = (e.numer(), e.denom());
    if n.degree_in(v) != n.min_degree_in(v) || d.degree_in(v) != d.min_degree_in(v) {
        return None;
    }
    let a = n.degree_in(v) as i64;
    let b = d.degree_in(v) as i64;
    let r = e.mul(&RationalExpr::var_pow(v, b - a));
    Some((a - b, r))
}

/// Every applicable normalization equation, best first.
///
/// `current[j]` is `None` once equation `j` has been used. `unsolved` holds
/// parameter indices; `units` those parameters carrying a unit `v_k`.
pub fn candidates(
    current: &[Option<RationalExpr>],
    unsolved: &BTreeSet<u32>,
    units: &BTreeSet<u32>,
) -> Vec<Candidate> {
    let active: Vec<(usize, &RationalExpr)> = current
        .iter()
        .enumerate()
        .filter_map(|(j, e)| e.as_ref().map(|e| (j, e)))
        .collect();
    let anywhere = |v: Var| active.iter().any(|(_, e)| e.contains(v));
    let mut out = Vec::new();
    for &k in unsolved {
        let t = Var::t(k);
        let v = Var::v(k);
        let has_unit = units.contains(&k);
        let unit_elsewhere = has_unit && anywhere(v);
        let t_elsewhere = anywhere(t);
        for &(j, e) in &active {
            if !unit_elsewhere && e.contains(t) && e.numer().degree_in(t) == 1 && !e.denom().contains(t) {
                let coeffs = e.numer().coefficients_in(t);
                let (b, a) = (&coeffs[0], &coeffs[1]);
                let solution = RationalExpr::from_poly(b.neg())
                    .div(&RationalExpr::from_poly(a.clone()))
                    .expect("coefficient of t is nonzero");
                let tier = if a.contains_kind(VarKind::GroupParam) || a.contains_kind(VarKind::ExpUnit) {
                    1
                } else {
                    0
                };
                out.push(Candidate {
                    tier,
                    equation: j,
                    variable: t,
                    constant: Rational::zero(),
                    assumptions: assumption_list(&[a]),
                    action: Action::Solve { solution },
                });
            }
            if has_unit && !t_elsewhere && e.contains(v) {
                let Some((m, r)) = split_unit(e, v) else {
                    continue;
                };
                if m.abs() == 1 {
                    let solution = r.pow(-m).expect("nonzero remainder");
                    out.push(Candidate {
                        tier: 2,
                        equation: j,
                        variable: v,
                        constant: Rational::one(),
                        assumptions: assumption_list(&[r.numer(), r.denom()]),
                        action: Action::Solve { solution },
                    });
                } else if r.is_parameter_free() {
                    out.push(Candidate {
                        tier: 3,
                        equation: j,
                        variable: v,
                        constant: Rational::one(),
                        assumptions: Vec::new(),
                        action: Action::Defer,
                    });
                }
            }
        }
    }
    out.sort_by_key(|c| (c.tier, c.variable.index, c.equation, c.variable.kind));
    out
}

/// The best normalization equation whose assumptions hold at the witness
/// point, or `None` when stalled.
pub fn choose_step(
    current: &[Option<RationalExpr>],
    unsolved: &BTreeSet<u32>,
    units: &BTreeSet<u32>,
    witness: &mut Witness,
) -> Option<Candidate> {
    candidates(current, unsolved, units)
        .into_iter()
        .find(|c| c.assumptions.iter().all(|a| witness.nonzero(a)))
}

fn substitute_all(
    current: &[Option<RationalExpr>],
    skip: usize,
    var: Var,
    value: &RationalExpr,
) -> Option<Vec<Option<RationalExpr>>> {
    let bindings: BTreeMap<Var, RationalExpr> = [(var, value.clone())].into();
    current
        .iter()
        .enumerate()
        .map(|(j, e)| match e {
            None => Some(None),
            Some(_) if j == skip => Some(None),
            Some(e) if !e.contains(var) => Some(Some(e.clone())),
            Some(e) => e.substitute(&bindings).ok().map(Some),
        })
        .collect()
}

/// Runs the normalization loop and the lattice stage.
pub fn normalize(lifted: &LiftedInvariantSet, opts: NormalizeOptions) -> InvariantBasis {
    let expected_count = lifted.algebra.coadjoint_profile().n_invariants;
    normalize_with_count(lifted, opts, expected_count)
}

/// [`normalize`] with a precomputed `N_g`.
pub fn normalize_with_count(lifted: &LiftedInvariantSet, opts: NormalizeOptions, expected_count: usize) -> InvariantBasis {
    let mut current: Vec<Option<RationalExpr>> = lifted.exprs.iter().cloned().map(Some).collect();
    let mut pool: Vec<(usize, RationalExpr)> = Vec::new();
    let mut unsolved: BTreeSet<u32> = lifted.params.iter().copied().collect();
    let units: BTreeSet<u32> = lifted.scales.0.keys().copied().collect();
    let mut witness = Witness::new(opts.seed);
    let mut trace = NormalizationTrace::default();
    let mut solved = 0;
    let mut rounds = 0;
    while rounds < opts.max_steps && !unsolved.is_empty() {
        let mut applied = false;
        for c in candidates(&current, &unsolved, &units) {
            if !c.assumptions.iter().all(|a| witness.nonzero(a)) {
                continue;
            }
            let k = param_of(c.variable).expect("parameter");
            match &c.action {
                Action::Defer => {
                    let e = current[c.equation].take().expect("active equation");
                    pool.push((c.equation, e));
                    trace.deferred.push((c.equation + 1, c.variable));
                }
                Action::Solve { solution } => {
                    let Some(next) = substitute_all(&current, c.equation, c.variable, solution) else {
                        continue;
                    };
                    current = next;
                    solved += 1;
                    trace.steps.push(NormalizationStep {
                        equation_index: c.equation + 1,
                        solved_variable: c.variable,
                        constant: c.constant.clone(),
                        solution: solution.clone(),
                        assumptions: c.assumptions.clone(),
                    });
                }
            }
            unsolved.remove(&k);
            applied = true;
            break;
        }
        if !applied {
            break;
        }
        rounds += 1;
    }
    trace.stalled = !unsolved.is_empty();
    let mut remaining: Vec<(usize, RationalExpr)> = current
        .into_iter()
        .enumerate()
        .filter_map(|(j, e)| e.map(|e| (j, e)))
        .chain(pool)
        .collect();
    remaining.sort_by_key(|(j, _)| *j);
    trace.residual_exprs = remaining.iter().map(|(j, e)| (j + 1, e.clone())).collect();

    let (invariants, moves, lattice_rank) = lattice_stage(&remaining);
    trace.lattice_moves = moves;
    trace.lattice_rank = lattice_rank;
    let invariants = canonical_order(invariants);
    InvariantBasis {
        algebra: lifted.algebra.clone(),
        certified: invariants.len() == expected_count,
        invariants,
        rho: solved + lattice_rank,
        expected_count,
        trace,
    }
}

/// Integer relations among unit exponent vectors; returns the unit-free,
/// parameter-free products, the relations used, and the exponent rank.
fn lattice_stage(remaining: &[(usize, RationalExpr)]) -> (Vec<RationalExpr>, Vec<LatticeMove>, usize) {
    let mut rows: Vec<(usize, BTreeMap<Var, i64>, RationalExpr)> = Vec::new();
    for (j, e) in remaining {
        let mut rest = e.clone();
        let mut w = BTreeMap::new();
        let mut ok = true;
        for v in e.vars().into_iter().filter(|v| v.kind == VarKind::ExpUnit) {
            match split_unit(&rest, v) {
                Some((m, r)) => {
                    w.insert(v, m);
                    rest = r;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && !rest.is_constant() {
            rows.push((*j, w, rest));
        }
    }
    if rows.is_empty() {
        return (Vec::new(), Vec::new(), 0);
    }
    let unit_vars: Vec<Var> = rows
        .iter()
        .flat_map(|(_, w, _)| w.keys().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    // Columns of the exponent matrix become rows of its transpose.
    let wt: RatMatrix = unit_vars
        .iter()
        .map(|u| {
            rows.iter()
                .map(|(_, w, _)| Rational::from_integer(w.get(u).copied().unwrap_or(0).into()))
                .collect()
        })
        .collect();
    let rank = linalg::rank(&wt);
    let mut invariants = Vec::new();
    let mut moves = Vec::new();
    for null in linalg::nullspace(&wt, rows.len()) {
        let m = linalg::primitive_integer_vector(&null);
        let mut prod = RationalExpr::one();
        let mut equations = Vec::new();
        let mut exponents = Vec::new();
        for ((j, _, r), e) in rows.iter().zip(&m) {
            if e.is_zero() {
                continue;
            }
            let k = e.to_i64().expect("small exponent");
            prod = prod.mul(&r.pow(k).expect("nonzero factor"));
            equations.push(j + 1);
            exponents.push(e.clone());
        }
        if prod.is_parameter_free() && !prod.is_constant() {
            invariants.push(prod.without_constant_factor());
            moves.push(LatticeMove { equations, exponents });
        }
    }
    (invariants, moves, rank)
}

/// Canonical invariant list: scalars dropped, duplicates removed, sorted by
/// numerator degree, denominator degree, then printed form.
pub fn canonical_order(fs: Vec<RationalExpr>) -> Vec<RationalExpr> {
    let names = VarNames::plain();
    let mut keyed: Vec<(u32, u32, String, RationalExpr)> = Vec::new();
    for f in fs {
        let f = f.without_constant_factor();
        let f = if f.numer().leading_coeff().is_negative() { f.neg() } else { f };
        let s = f.display(&names).to_string();
        if keyed.iter().any(|(_, _, t, _)| *t == s) {
            continue;
        }
        keyed.push((f.numer().total_degree(), f.denom().total_degree(), s, f));
    }
    keyed.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
    keyed.into_iter().map(|(_, _, _, f)| f).collect()
}

/// Recomputes the residual expressions by applying the recorded steps to
/// the original lifted invariants.
pub fn replay(lifted: &LiftedInvariantSet, trace: &NormalizationTrace) -> Option<Vec<(usize, RationalExpr)>> {
    let mut current: Vec<Option<RationalExpr>> = lifted.exprs.iter().cloned().map(Some).collect();
    for step in &trace.steps {
        current = substitute_all(&current, step.equation_index - 1, step.solved_variable, &step.solution)?;
    }
    Some(
        current
            .into_iter()
            .enumerate()
            .filter_map(|(j, e)| e.map(|e| (j + 1, e)))
            .collect(),
    )
}

impl InvariantBasis {
    /// All assumptions of the trace, without repetition.
    pub fn assumptions(&self) -> Vec<Poly> {
        let mut out: Vec<Poly> = Vec::new();
        for s in &self.trace.steps {
            for a in &s.assumptions {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
        }
        out
    }
}

/// Clears denominators that are products of polynomial invariants already in
/// the basis: `N / (P_1^a ... P_m^b)` becomes `N`.
pub fn polynomialize(basis: &InvariantBasis) -> InvariantBasis {
    let alg = &basis.algebra;
    let mut fs = basis.invariants.clone();
    loop {
        let polys: Vec<Poly> = fs
            .iter()
            .filter(|f| f.is_polynomial() && !f.is_constant())
            .map(|f| f.numer().clone())
            .collect();
        let mut changed = false;
        for f in fs.iter_mut() {
            if f.is_polynomial() {
                continue;
            }
            let mut d = f.denom().clone();
            for p in &polys {
                while let Some(q) = d.div_exact(p) {
                    d = q;
                }
            }
            if !d.is_constant() {
                continue;
            }
            let candidate = RationalExpr::from_poly(f.numer().clone()).without_constant_factor();
            let ok = verifier::infinitesimal_check(&candidate, alg)
                .map(|r| r.iter().all(RationalExpr::is_zero))
                .unwrap_or(false);
            if ok {
                *f = candidate;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let fs = canonical_order(fs);
    let independent = verifier::independence_rank_rational(&fs, alg.dim()) == fs.len();
    InvariantBasis {
        algebra: basis.algebra.clone(),
        certified: basis.certified && independent && fs.len() == basis.expected_count,
        invariants: fs,
        trace: basis.trace.clone(),
        rho: basis.rho,
        expected_count: basis.expected_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::default_basis;
    use crate::exp_adjoint::{inner_automorphism_matrix, lift};
    use crate::symbolic::parse::parse_expr;
    use crate::symbolic::{int, rat};

    fn g48(b: Rational) -> LieAlgebra {
        LieAlgebra::new(
            default_basis(4),
            [
                (1, 4, vec![(1, int(1) + &b)]),
                (2, 3, vec![(1, int(1))]),
                (2, 4, vec![(2, int(1))]),
                (3, 4, vec![(3, b)]),
            ],
        )
        .unwrap()
    }

    fn run(b: Rational) -> InvariantBasis {
        let l = inner_automorphism_matrix(&g48(b), &[1, 2, 3, 4], &[1, 1, 1, -1]).unwrap();
        normalize(&l, NormalizeOptions::default())
    }

    fn show(fs: &[RationalExpr]) -> Vec<String> {
        fs.iter().map(|f| f.to_string()).collect()
    }

    #[test]
    fn first_step_for_b_minus_one_solves_t3() {
        let l = inner_automorphism_matrix(&g48(int(-1)), &[1, 2, 3, 4], &[1, 1, 1, -1]).unwrap();
        let current: Vec<_> = l.exprs.iter().cloned().map(Some).collect();
        let unsolved = l.params.iter().copied().collect();
        let units = l.scales.0.keys().copied().collect();
        let c = choose_step(&current, &unsolved, &units, &mut Witness::new(0)).unwrap();
        // t2 and t3 both enter affinely; t2 (from I_3) wins the index tie-break.
        assert_eq!(c.variable, Var::t(2));
        let all = candidates(&current, &unsolved, &units);
        let t3 = all.iter().find(|c| c.variable == Var::t(3)).unwrap();
        assert_eq!(t3.equation, 1);
        assert_eq!(t3.solution().unwrap().to_string(), "x2/x1");
        assert_eq!(show(&t3.assumptions.iter().cloned().map(RationalExpr::from_poly).collect::<Vec<_>>()), ["x1"]);
    }

    #[test]
    fn g48_b_minus_one() {
        let basis = run(int(-1));
        assert!(basis.certified);
        assert_eq!(show(&basis.invariants), ["x1", "(x1*x4 - x2*x3)/x1"]);
        assert_eq!(basis.rho, 2);
        let poly = polynomialize(&basis);
        assert_eq!(show(&poly.invariants), ["x1", "x1*x4 - x2*x3"]);
        assert!(poly.certified);
    }

    #[test]
    fn g48_generic_b_has_no_invariants() {
        for b in [rat(1, 2), int(1)] {
            let basis = run(b);
            assert!(basis.invariants.is_empty());
            assert!(basis.certified);
            assert_eq!(basis.rho, 4);
        }
    }

    #[test]
    fn abelian_stalls_immediately() {
        let l = lift(&LieAlgebra::abelian(3)).unwrap();
        let current: Vec<_> = l.exprs.iter().cloned().map(Some).collect();
        assert!(choose_step(&current, &BTreeSet::new(), &BTreeSet::new(), &mut Witness::new(0)).is_none());
        let basis = normalize(&l, NormalizeOptions::default());
        assert!(basis.certified);
        assert_eq!(show(&basis.invariants), ["x1", "x2", "x3"]);
    }

    #[test]
    fn sl2_casimir() {
        let a = LieAlgebra::new(
            default_basis(3),
            [(1, 2, vec![(1, int(-2))]), (1, 3, vec![(2, int(1))]), (2, 3, vec![(3, int(-2))])],
        )
        .unwrap();
        let basis = normalize(&lift(&a).unwrap(), NormalizeOptions::default());
        assert!(basis.certified, "{:?}", basis.trace);
        assert_eq!(basis.invariants.len(), 1);
        let expected = parse_expr("x2^2 + 4*x1*x3", &VarNames::plain()).unwrap();
        let rank = verifier::independence_rank_rational(&[basis.invariants[0].clone(), expected], 3);
        assert_eq!(rank, 1);
    }

    #[test]
    fn replay_reproduces_residuals() {
        let l = inner_automorphism_matrix(&g48(rat(1, 2)), &[1, 2, 3, 4], &[1, 1, 1, -1]).unwrap();
        let basis = normalize(&l, NormalizeOptions::default());
        let replayed = replay(&l, &basis.trace).unwrap();
        assert_eq!(replayed, basis.trace.residual_exprs);
        assert_eq!(basis.trace.deferred, vec![(1, Var::v(4))]);
    }

    #[test]
    fn polynomialize_keeps_polynomials() {
        let basis = run(int(-1));
        let once = polynomialize(&basis);
        let twice = polynomialize(&once);
        assert_eq!(once.invariants, twice.invariants);
    }
}
