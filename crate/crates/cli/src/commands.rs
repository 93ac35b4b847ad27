use std::fmt::Write as _;
use std::path::Path;

use lie_inv::algebra::{AlgebraError, LieAlgebra};
use lie_inv::enveloping::{commutes_with_generators, pbw_reduce, symmetrize, NcPolynomial};
use lie_inv::exp_adjoint::{inner_automorphism_matrix, ExpError, LiftedInvariantSet};
use lie_inv::families::{self, catalog, reduce_gamma, theorem_basis, FamilyError, GammaMatrix};
use lie_inv::normalization::{normalize, polynomialize, InvariantBasis, NormalizeOptions};
use lie_inv::symbolic::parse::{parse_expr, parse_power_product, ParseError};
use lie_inv::symbolic::{PowerProduct, RationalExpr, Var, VarNames};
use lie_inv::verifier::{self, Certificate};
use serde_json::{json, Value};

use crate::{CatalogAction, Command, FamilyKind, OrderArgs, RunArgs};

pub const SCHEMA: &str = "1";

pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

pub struct CliError {
    pub code: u8,
    pub message: String,
    pub detail: Vec<String>,
    pub stdout: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
            detail: Vec::new(),
            stdout: String::new(),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::JacobiViolation(quads) => CliError {
                code: 1,
                message: format!("Jacobi identity fails for {} quadruple(s)", quads.len()),
                detail: quads.iter().map(|q| format!("  (i, j, k, l) = ({}, {}, {}, {})", q[0], q[1], q[2], q[3])).collect(),
                stdout: String::new(),
            },
            other => CliError::input(other.to_string()),
        }
    }
}

impl From<ExpError> for CliError {
    fn from(e: ExpError) -> Self {
        match e {
            ExpError::Order(a) => a.into(),
            other => CliError {
                code: 3,
                message: format!("unsupported algebra: {other}"),
                detail: Vec::new(),
                stdout: String::new(),
            },
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Algebra(a) => a.into(),
            other => CliError::input(other.to_string()),
        }
    }
}

fn parse_failure(e: ParseError, input: &str) -> CliError {
    CliError {
        code: 2,
        message: e.to_string(),
        detail: e.caret(input).lines().map(str::to_string).collect(),
        stdout: String::new(),
    }
}

fn ok(stdout: String) -> Result<Outcome, CliError> {
    Ok(Outcome { stdout, code: 0 })
}

fn json_out(v: Value, code: u8) -> Result<Outcome, CliError> {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    Ok(Outcome { stdout: s, code })
}

/// Reads, parses and validates an algebra file.
pub fn load_algebra(path: &Path) -> Result<LieAlgebra, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let alg = LieAlgebra::from_json(&text).map_err(|e| match e {
        AlgebraError::Json { line, column, message } => {
            CliError::input(format!("{}:{line}:{column}: {message}", path.display()))
        }
        other => CliError::from(other),
    })?;
    alg.validate()?;
    Ok(alg)
}

fn seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("LIE_INV_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("LIE_INV_SEED is not an unsigned integer: '{v}'"))),
        Err(_) => Ok(0),
    }
}

fn options(run: &RunArgs) -> Result<NormalizeOptions, CliError> {
    Ok(NormalizeOptions {
        max_steps: run.max_steps,
        seed: seed(run.seed)?,
    })
}

fn parse_signs(raw: &[String]) -> Result<Vec<i8>, CliError> {
    raw.iter()
        .map(|s| match s.trim() {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(CliError::input(format!("invalid sign '{other}' (use + or -)"))),
        })
        .collect()
}

fn lifted_set(alg: &LieAlgebra, args: &OrderArgs) -> Result<LiftedInvariantSet, CliError> {
    let (default_order, default_signs) = alg.generator_order();
    let order = args.order.clone().unwrap_or_else(|| default_order.to_vec());
    let signs = match &args.signs {
        Some(s) => parse_signs(s)?,
        None if args.order.is_some() => vec![1; order.len()],
        None => default_signs.to_vec(),
    };
    Ok(inner_automorphism_matrix(alg, &order, &signs)?)
}

fn title(alg: &LieAlgebra) -> String {
    format!("{} (dim {})", alg.name().unwrap_or("algebra"), alg.dim())
}

pub fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate { file } => {
            let alg = load_algebra(&file)?;
            ok(format!("ok: {}, {} bracket entries\n", title(&alg), alg.bracket_count()))
        }
        Command::Info { file, json } => info(&load_algebra(&file)?, json),
        Command::Lifted { file, order, json } => lifted(&load_algebra(&file)?, &order, json),
        Command::Invariants {
            file,
            order,
            run,
            polynomial,
            json,
        } => invariants(&load_algebra(&file)?, &order, &run, polynomial, json),
        Command::Verify { file, invariants, json } => verify(&load_algebra(&file)?, &invariants, json),
        Command::Casimir {
            file,
            invariants,
            raw,
            run,
            json,
        } => casimir(&load_algebra(&file)?, &invariants, raw, &run, json),
        Command::Family {
            kind,
            n,
            gamma_file,
            emit_theorem_basis,
            json,
        } => family(kind, n, gamma_file.as_deref(), emit_theorem_basis, json),
        Command::Catalog { action } => catalog_cmd(action),
    }
}

fn info(alg: &LieAlgebra, json: bool) -> Result<Outcome, CliError> {
    let p = alg.coadjoint_profile();
    let center: Vec<String> = p
        .center_basis
        .iter()
        .map(|v| {
            let e = v.iter().enumerate().fold(RationalExpr::zero(), |acc, (i, c)| {
                acc.add(&RationalExpr::var(Var::x(i as u32 + 1)).scale(c))
            });
            let names = VarNames::new(alg.basis().to_vec());
            e.display(&names).to_string()
        })
        .collect();
    if json {
        return json_out(
            json!({
                "schema": SCHEMA,
                "name": alg.name(),
                "dim": alg.dim(),
                "basis": alg.basis(),
                "coordinates": alg.coordinate_names(),
                "coadjoint_rank": p.rank,
                "n_invariants": p.n_invariants,
                "center": center,
                "parameters": p.aut_param_count,
            }),
            0,
        );
    }
    let mut s = String::new();
    writeln!(s, "algebra: {}", title(alg)).unwrap();
    writeln!(s, "basis: {}", alg.basis().join(", ")).unwrap();
    writeln!(s, "coordinates: {}", alg.coordinate_names().join(", ")).unwrap();
    writeln!(s, "coadjoint rank: {}", p.rank).unwrap();
    writeln!(s, "N_g: {}", p.n_invariants).unwrap();
    writeln!(s, "center: {}", if center.is_empty() { "0".to_string() } else { center.join(", ") }).unwrap();
    writeln!(s, "group parameters: {}", p.aut_param_count).unwrap();
    ok(s)
}

fn unit_lines(set: &LiftedInvariantSet) -> Vec<String> {
    set.scales
        .0
        .iter()
        .map(|(k, q)| {
            if *q == 1 {
                format!("v{k} = exp(t{k})")
            } else {
                format!("v{k} = exp(t{k}/{q})")
            }
        })
        .collect()
}

fn lifted(alg: &LieAlgebra, args: &OrderArgs, json: bool) -> Result<Outcome, CliError> {
    let set = lifted_set(alg, args)?;
    let names = alg.var_names();
    let rows: Vec<Vec<String>> = (0..set.b.rows())
        .map(|i| set.b.row(i).iter().map(|e| e.display(&names).to_string()).collect())
        .collect();
    let exprs: Vec<String> = set.exprs.iter().map(|e| e.display(&names).to_string()).collect();
    if json {
        return json_out(
            json!({
                "schema": SCHEMA,
                "order": set.order,
                "signs": set.signs,
                "units": unit_lines(&set),
                "B": rows,
                "lifted": exprs,
            }),
            0,
        );
    }
    let mut s = String::new();
    let signs: Vec<&str> = set.signs.iter().map(|&g| if g < 0 { "-" } else { "+" }).collect();
    let order: Vec<String> = set.order.iter().map(ToString::to_string).collect();
    writeln!(s, "order: {}  signs: {}", order.join(","), signs.join(",")).unwrap();
    for u in unit_lines(&set) {
        writeln!(s, "{u}").unwrap();
    }
    writeln!(s, "B =").unwrap();
    for r in &rows {
        writeln!(s, "  [{}]", r.join(", ")).unwrap();
    }
    for (j, e) in exprs.iter().enumerate() {
        writeln!(s, "I{} = {e}", j + 1).unwrap();
    }
    ok(s)
}

fn compute_basis(alg: &LieAlgebra, order: &OrderArgs, run: &RunArgs) -> Result<InvariantBasis, CliError> {
    let set = lifted_set(alg, order)?;
    Ok(normalize(&set, options(run)?))
}

fn invariants(alg: &LieAlgebra, order: &OrderArgs, run: &RunArgs, polynomial: bool, json: bool) -> Result<Outcome, CliError> {
    let mut basis = compute_basis(alg, order, run)?;
    if polynomial {
        basis = polynomialize(&basis);
    }
    let names = alg.var_names();
    let shown: Vec<String> = basis.invariants.iter().map(|f| f.display(&names).to_string()).collect();
    let assumptions: Vec<String> = basis
        .assumptions()
        .into_iter()
        .map(|p| RationalExpr::from_poly(p).display(&names).to_string())
        .collect();
    let code = if basis.certified { 0 } else { 1 };
    if json {
        let steps: Vec<Value> = basis
            .trace
            .steps
            .iter()
            .map(|st| {
                json!({
                    "equation": st.equation_index,
                    "variable": st.solved_variable.to_string(),
                    "constant": st.constant.to_string(),
                    "solution": st.solution.display(&names).to_string(),
                })
            })
            .collect();
        return json_out(
            json!({
                "schema": SCHEMA,
                "name": alg.name(),
                "dim": alg.dim(),
                "n_invariants": basis.expected_count,
                "invariants": shown,
                "certified": basis.certified,
                "rho": basis.rho,
                "assumptions": assumptions,
                "steps": steps,
                "deferred": basis.trace.deferred.iter().map(|(j, v)| json!({"equation": j, "unit": v.to_string()})).collect::<Vec<_>>(),
                "lattice_rank": basis.trace.lattice_rank,
            }),
            code,
        );
    }
    let mut s = String::new();
    writeln!(s, "algebra: {}", title(alg)).unwrap();
    if shown.is_empty() && basis.expected_count == 0 {
        writeln!(s, "no invariants (N_g = 0)").unwrap();
    } else {
        writeln!(s, "N_g: {}", basis.expected_count).unwrap();
        for (l, f) in shown.iter().enumerate() {
            writeln!(s, "F{} = {f}", l + 1).unwrap();
        }
    }
    if !assumptions.is_empty() {
        writeln!(s, "assuming nonzero: {}", assumptions.join(", ")).unwrap();
    }
    writeln!(s, "rho: {}", basis.rho).unwrap();
    writeln!(s, "certified: {}", basis.certified).unwrap();
    Ok(Outcome { stdout: s, code })
}

fn parse_all(alg: &LieAlgebra, exprs: &[String]) -> Result<Vec<PowerProduct>, CliError> {
    let names = alg.var_names();
    exprs
        .iter()
        .map(|e| parse_power_product(e, &names).map_err(|err| parse_failure(err, e)))
        .collect()
}

fn certificate_text(alg: &LieAlgebra, fs: &[PowerProduct], cert: &Certificate) -> String {
    let names = alg.var_names();
    let mut s = String::new();
    for (l, (f, row)) in fs.iter().zip(&cert.checks).enumerate() {
        let bad: Vec<String> = row
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
            .map(|(i, r)| format!("X{} -> {}", i + 1, r.display(&names)))
            .collect();
        if bad.is_empty() {
            writeln!(s, "F{} = {}: invariant", l + 1, f.display(&names)).unwrap();
        } else {
            writeln!(s, "F{} = {}: not invariant", l + 1, f.display(&names)).unwrap();
            for b in bad {
                writeln!(s, "  {b}").unwrap();
            }
        }
    }
    writeln!(s, "jacobian rank: {}", cert.jacobian_rank).unwrap();
    writeln!(s, "N_g: {}", cert.expected_count).unwrap();
    writeln!(s, "passed: {}", cert.passed).unwrap();
    s
}

fn verify(alg: &LieAlgebra, exprs: &[String], json: bool) -> Result<Outcome, CliError> {
    let fs = parse_all(alg, exprs)?;
    let cert = verifier::certify_basis(&fs, alg).map_err(|e| CliError::input(e.to_string()))?;
    let code = if cert.passed { 0 } else { 1 };
    if json {
        let names = alg.var_names();
        let checks: Vec<Value> = fs
            .iter()
            .zip(&cert.checks)
            .map(|(f, row)| {
                json!({
                    "expression": f.display(&names).to_string(),
                    "residuals": row.iter().map(|r| r.display(&names).to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        return json_out(
            json!({
                "schema": SCHEMA,
                "checks": checks,
                "jacobian_rank": cert.jacobian_rank,
                "n_invariants": cert.expected_count,
                "passed": cert.passed,
            }),
            code,
        );
    }
    Ok(Outcome {
        stdout: certificate_text(alg, &fs, &cert),
        code,
    })
}

fn casimir(alg: &LieAlgebra, given: &[String], raw: bool, run: &RunArgs, json: bool) -> Result<Outcome, CliError> {
    let names = alg.var_names();
    let sources: Vec<RationalExpr> = if given.is_empty() {
        let basis = compute_basis(alg, &OrderArgs { order: None, signs: None }, run)?;
        polynomialize(&basis).invariants
    } else {
        given
            .iter()
            .map(|e| parse_expr(e, &names).map_err(|err| parse_failure(err, e)))
            .collect::<Result<_, _>>()?
    };
    let mut entries = Vec::new();
    let mut s = String::new();
    let mut all_central = true;
    for (l, f) in sources.iter().enumerate() {
        let shown = f.display(&names).to_string();
        match symmetrize(f) {
            Ok(sym) => {
                let op: NcPolynomial = if raw { sym.clone() } else { pbw_reduce(&sym, alg) };
                let central = commutes_with_generators(&sym, alg).iter().all(NcPolynomial::is_zero);
                all_central &= central;
                let text = op.display(alg.basis()).to_string();
                writeln!(s, "C{} = {text}", l + 1).unwrap();
                writeln!(s, "  from {shown}; central: {central}").unwrap();
                entries.push(json!({"invariant": shown, "operator": text, "central": central}));
            }
            Err(e) => {
                writeln!(s, "F{} = {shown}: skipped ({e})", l + 1).unwrap();
                entries.push(json!({"invariant": shown, "skipped": e.to_string()}));
            }
        }
    }
    if sources.is_empty() {
        writeln!(s, "no invariants").unwrap();
    }
    let code = if all_central { 0 } else { 1 };
    if json {
        return json_out(json!({"schema": SCHEMA, "reduced": !raw, "operators": entries}), code);
    }
    Ok(Outcome { stdout: s, code })
}

fn family(kind: FamilyKind, n: usize, gamma_file: Option<&Path>, emit: bool, json: bool) -> Result<Outcome, CliError> {
    let (alg, gamma) = match kind {
        FamilyKind::T0 => (families::build_t0(n)?, GammaMatrix::empty(n)?),
        FamilyKind::St | FamilyKind::T => {
            let g = families::st_gamma(n)?;
            let alg = if matches!(kind, FamilyKind::T) { families::build_t(n)? } else { families::build_st(n)? };
            (alg, g)
        }
        FamilyKind::Tgamma => {
            let path = gamma_file.ok_or_else(|| CliError::input("tgamma needs --gamma-file"))?;
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            let g = GammaMatrix::from_json(&text)?;
            if g.n() != n {
                return Err(CliError::input(format!("gamma file has n = {}, but --n is {n}", g.n())));
            }
            (families::build_tgamma(&g)?, g)
        }
    };
    if !emit {
        if json {
            let v: Value = serde_json::from_str(&alg.to_json()).expect("valid json");
            return json_out(v, 0);
        }
        return ok(alg.to_json() + "\n");
    }
    let reduced = reduce_gamma(&gamma);
    let basis = theorem_basis(&reduced);
    // tgamma is reported for the reduced parameters; st and t are built that way
    let target = match kind {
        FamilyKind::Tgamma => families::build_tgamma(&reduced.gamma)?,
        _ => alg.clone(),
    };
    let names = target.var_names();
    let mut exprs: Vec<String> = basis.all().iter().map(|e| e.display(&names).to_string()).collect();
    if matches!(kind, FamilyKind::T) {
        exprs.push("z".into());
    }
    let gamma_rows: Vec<Vec<String>> =
        reduced.gamma.rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    if json {
        return json_out(
            json!({
                "schema": SCHEMA,
                "name": target.name(),
                "n": n,
                "s_prime": reduced.s_prime,
                "k_values": reduced.k_values,
                "gamma": gamma_rows,
                "invariants": exprs,
            }),
            0,
        );
    }
    let mut s = String::new();
    writeln!(s, "algebra: {}", title(&target)).unwrap();
    if reduced.gamma.s() > 0 {
        for (p, r) in gamma_rows.iter().enumerate() {
            writeln!(s, "gamma{} = ({})", p + 1, r.join(", ")).unwrap();
        }
        let ks: Vec<String> = reduced.k_values.iter().map(ToString::to_string).collect();
        writeln!(s, "s' = {}  k = [{}]", reduced.s_prime, ks.join(", ")).unwrap();
    }
    if exprs.is_empty() {
        writeln!(s, "no invariants").unwrap();
    }
    for (l, e) in exprs.iter().enumerate() {
        writeln!(s, "F{} = {e}", l + 1).unwrap();
    }
    ok(s)
}

fn catalog_cmd(action: CatalogAction) -> Result<Outcome, CliError> {
    match action {
        CatalogAction::List => {
            let mut s = String::new();
            for e in catalog::ENTRIES {
                let params: Vec<String> = e.params.iter().map(|(p, d)| format!("{p}={d}")).collect();
                writeln!(s, "{:<8} {:<6} {}", e.name, params.join(" "), e.description).unwrap();
            }
            ok(s)
        }
        CatalogAction::Show { name, params, basis } => {
            let params = params
                .iter()
                .map(|p| catalog::parse_param(p))
                .collect::<Result<Vec<_>, _>>()?;
            let alg = catalog::build(&name, &params)?;
            if basis {
                let names = alg.var_names();
                let mut s = String::new();
                for (l, f) in catalog::golden_basis(&name, &params)?.iter().enumerate() {
                    writeln!(s, "F{} = {}", l + 1, f.display(&names)).unwrap();
                }
                return ok(s);
            }
            ok(alg.to_json() + "\n")
        }
    }
}
