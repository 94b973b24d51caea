//! Dispatch from a parsed problem file to the engine, producing a
//! [`Report`] whose status fixes the process exit code: pass, definite
//! check failure, inconclusive, or input error.

use serde_json::{json, Value};

use crate::darboux::{
    find_semi_invariants, integrability_certificate, RationalVectorField, Verdict,
};
use crate::normalform::{normalize_to_degree, validate_linear_part, LinearPart};
use crate::problem::ProblemFile;
use crate::report::{Report, Status};
use crate::resonance::{
    enumerate_resonances, resonance_lattice_solver, toric_decompose, weight,
};
use crate::scalars::FieldElement;
use crate::series::{
    apply_derivation, pushforward, render_series, MultiIndex, TruncatedSeries,
    VectorFieldJet,
};
use crate::walcher::{
    verify_commutant_conservation, verify_darboux_conservation, walcher_normalize,
    IdentityCheck, SemiInvariant,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Normalize,
    Resonances,
    Toric,
    Walcher,
    VerifyConservation,
    CheckDarboux,
    FindSemiInvariants,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Normalize,
        Command::Resonances,
        Command::Toric,
        Command::Walcher,
        Command::VerifyConservation,
        Command::CheckDarboux,
        Command::FindSemiInvariants,
    ];

    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            Command::Normalize => "normalize",
            Command::Resonances => "resonances",
            Command::Toric => "toric",
            Command::Walcher => "walcher",
            Command::VerifyConservation => "verify-conservation",
            Command::CheckDarboux => "check-darboux",
            Command::FindSemiInvariants => "find-semi-invariants",
        }
    }

    #[must_use]
    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Truncation override; defaults to the problem's declared degree.
    pub degree: Option<u32>,
    /// Degree window for the semi-invariant search; defaults to 2.
    pub search_degree: Option<u32>,
}

pub fn run(command: Command, problem: &ProblemFile, options: &RunOptions) -> Report {
    let name = command.name();
    let degree = options.degree.unwrap_or(problem.degree);
    if degree < 2 || degree > problem.degree {
        return Report::input_error(
            name,
            degree,
            &format!(
                "degree must lie in 2..={} (the problem's truncation degree)",
                problem.degree
            ),
        );
    }
    let x = problem.vector_field.truncated(degree);
    match command {
        Command::Normalize => run_normalize(name, &x, degree),
        Command::Resonances => run_resonances(name, &x, degree),
        Command::Toric => run_toric(name, &x, degree),
        Command::Walcher => run_walcher(name, problem, &x, degree),
        Command::VerifyConservation => run_conservation(name, problem, &x, degree),
        Command::CheckDarboux => run_check_darboux(name, problem, &x, degree),
        Command::FindSemiInvariants => {
            run_find_semi_invariants(name, &x, degree, options.search_degree.unwrap_or(2))
        }
    }
}

fn jet_value(v: &VectorFieldJet) -> Value {
    Value::Array(
        v.components()
            .iter()
            .map(|c| Value::String(render_series(c)))
            .collect(),
    )
}

fn scalars_value(xs: &[FieldElement]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

fn series_value(s: &TruncatedSeries) -> Value {
    Value::String(render_series(s))
}

fn identity_verdict(check: &IdentityCheck) -> (Status, Option<String>) {
    if check.passed {
        (Status::Pass, None)
    } else {
        let detail = check
            .first_failure_degree
            .map(|d| format!("first failure at degree {d}"));
        (Status::Fail, detail)
    }
}

fn run_normalize(name: &str, x: &VectorFieldJet, degree: u32) -> Report {
    let result = match normalize_to_degree(x, degree) {
        Ok(r) => r,
        Err(e) => return Report::input_error(name, degree, &e.to_string()),
    };
    let mut report = Report::new(name, degree);
    report.output("normalized", jet_value(&result.normalized));
    report.output("linear_diagonal", scalars_value(&result.linear.diag));
    if result.linear.has_nilpotent_part() {
        let rows: Vec<Value> = result
            .linear
            .nilp
            .iter()
            .map(|row| scalars_value(row))
            .collect();
        report.output("nilpotent_matrix", Value::Array(rows));
    }
    report.output(
        "coordinate_change",
        Value::Array(
            result
                .composed
                .components()
                .iter()
                .map(|c| Value::String(render_series(c)))
                .collect(),
        ),
    );
    report.output("steps", json!(result.steps.len()));
    report.output(
        "diagnostics",
        Value::Array(
            result
                .diagnostics
                .iter()
                .map(|d| {
                    json!({
                        "degree": d.degree,
                        "removed": d.removed,
                        "retained": d.retained,
                    })
                })
                .collect(),
        ),
    );

    let offender = first_nonresonant_term(&result.normalized, &result.linear, degree);
    match offender {
        None => report.check("resonance_purity", Status::Pass, None),
        Some(detail) => report.check("resonance_purity", Status::Fail, Some(detail)),
    }

    let moved = pushforward(x, &result.composed).expect("chains share the jet's shape");
    if moved == result.normalized {
        report.check("conjugacy", Status::Pass, None);
    } else {
        report.check(
            "conjugacy",
            Status::Fail,
            Some("pushforward through the composed chain disagrees".to_string()),
        );
    }
    report
}

fn first_nonresonant_term(
    jet: &VectorFieldJet,
    lin: &LinearPart,
    degree: u32,
) -> Option<String> {
    for k in 2..=degree {
        for j in 0..jet.dim() {
            for (a, _) in jet.component(j).graded_part(k).terms() {
                if weight(&lin.diag, a) != lin.diag[j] {
                    let mono = a.render().unwrap_or_else(|| "1".to_string());
                    return Some(format!("component {}: {} at degree {}", j + 1, mono, k));
                }
            }
        }
    }
    None
}

fn run_resonances(name: &str, x: &VectorFieldJet, degree: u32) -> Report {
    let lin = match validate_linear_part(x) {
        Ok(l) => l,
        Err(e) => return Report::input_error(name, degree, &e.to_string()),
    };
    let set = enumerate_resonances(&lin.diag, degree);
    let mut report = Report::new(name, degree);
    report.output("count", json!(set.entries.len()));
    report.output(
        "entries",
        Value::Array(
            set.entries
                .iter()
                .map(|(a, j)| {
                    json!({
                        "component": j + 1,
                        "exponents": a.exponents(),
                    })
                })
                .collect(),
        ),
    );

    let n = x.dim();
    let mut mismatch = None;
    for j in 0..n {
        let from_set: Vec<&MultiIndex> = set
            .entries
            .iter()
            .filter(|(_, k)| *k == j)
            .map(|(a, _)| a)
            .collect();
        let solved = resonance_lattice_solver(&lin.diag, j, degree);
        if from_set.len() != solved.len()
            || !from_set.iter().zip(&solved).all(|(a, b)| **a == *b)
        {
            mismatch = Some(format!("component {}", j + 1));
            break;
        }
    }
    match mismatch {
        None => report.check("solver_agreement", Status::Pass, None),
        Some(detail) => report.check("solver_agreement", Status::Fail, Some(detail)),
    }
    report
}

fn run_toric(name: &str, x: &VectorFieldJet, degree: u32) -> Report {
    let lin = match validate_linear_part(x) {
        Ok(l) => l,
        Err(e) => return Report::input_error(name, degree, &e.to_string()),
    };
    let decomp = match toric_decompose(&lin.diag) {
        Ok(d) => d,
        Err(e) => return Report::input_error(name, degree, &e.to_string()),
    };
    let mut report = Report::new(name, degree);
    report.output("tau", json!(decomp.tau));
    report.output("gammas", scalars_value(&decomp.gammas));
    report.output(
        "rho",
        Value::Array(
            decomp
                .rhos
                .iter()
                .map(|row| {
                    Value::Array(
                        row.iter().map(|e| Value::String(e.to_string())).collect(),
                    )
                })
                .collect(),
        ),
    );

    let field = x.field();
    let i = crate::scalars::iota(field).expect("decomposition implies iota");
    let mut ok = true;
    for (j, lam) in lin.diag.iter().enumerate() {
        let mut acc = FieldElement::zero(field);
        for (g, row) in decomp.gammas.iter().zip(&decomp.rhos) {
            let r = FieldElement::from_rational(
                field,
                num_rational::BigRational::from(row[j].clone()),
            );
            acc = &acc + &(g * &r);
        }
        if &(&acc * &i) != lam {
            ok = false;
            break;
        }
    }
    report.check(
        "reconstruction",
        if ok { Status::Pass } else { Status::Fail },
        None,
    );
    report
}

fn run_walcher(name: &str, problem: &ProblemFile, x: &VectorFieldJet, degree: u32) -> Report {
    if problem.semi_invariants.is_empty() {
        return Report::input_error(
            name,
            degree,
            "the command needs at least one declared semi-invariant",
        );
    }
    let mut report = Report::new(name, degree);
    let lin = validate_linear_part(x).ok();
    for (k, decl) in problem.semi_invariants.iter().enumerate() {
        let label = k + 1;
        let si = match SemiInvariant::new(
            x,
            decl.function.truncated(degree),
            decl.cofactor.truncated(degree),
        ) {
            Ok(si) => si,
            Err(e) => {
                report.check(
                    &format!("semi_invariant_{label}"),
                    Status::Fail,
                    Some(e.to_string()),
                );
                continue;
            }
        };
        report.check(&format!("semi_invariant_{label}"), Status::Pass, None);
        let res = match walcher_normalize(x, &si, degree) {
            Ok(r) => r,
            Err(e) => {
                report.check(
                    &format!("renormalization_{label}"),
                    Status::Fail,
                    Some(e.to_string()),
                );
                continue;
            }
        };
        report.output(&format!("beta_{label}"), series_value(&res.beta));
        report.output(&format!("f_star_{label}"), series_value(&res.f_star));
        report.output(&format!("lambda_star_{label}"), series_value(&res.lambda_star));
        report.output(&format!("lambda0_{label}"), json!(res.lambda0.to_string()));
        if let Some(w) = &res.torus_weights {
            report.output(
                &format!("torus_weights_{label}"),
                Value::Array(w.iter().map(|e| Value::String(e.to_string())).collect()),
            );
        }
        if let Some(c) = &res.torus_cofactors {
            report.output(&format!("torus_cofactors_{label}"), scalars_value(c));
        }

        let lhs = apply_derivation(x, &res.f_star).expect("shapes agree");
        let eigen = lhs == res.lambda_star.mul(&res.f_star);
        report.check(
            &format!("eigenfunction_{label}"),
            if eigen { Status::Pass } else { Status::Fail },
            None,
        );
        if let Some(lin) = &lin {
            let xs = lin.semisimple_jet(degree);
            let flat = apply_derivation(&xs, &res.lambda_star)
                .expect("shapes agree")
                .is_zero();
            report.check(
                &format!("cofactor_semisimple_invariance_{label}"),
                if flat { Status::Pass } else { Status::Fail },
                None,
            );
            let scaled = res.f_star.scale(&res.lambda0);
            let semi_eigen =
                apply_derivation(&xs, &res.f_star).expect("shapes agree") == scaled;
            report.check(
                &format!("semisimple_eigenfunction_{label}"),
                if semi_eigen { Status::Pass } else { Status::Fail },
                None,
            );
        }
        let product = res.beta.mul(si.function()) == res.f_star;
        report.check(
            &format!("unit_product_{label}"),
            if product { Status::Pass } else { Status::Fail },
            None,
        );
    }
    report
}

fn run_conservation(
    name: &str,
    problem: &ProblemFile,
    x: &VectorFieldJet,
    degree: u32,
) -> Report {
    if problem.integrals.is_empty() && problem.commuting_fields.is_empty() {
        return Report::input_error(
            name,
            degree,
            "the command needs an integral or a commuting field to verify",
        );
    }
    let lin = match validate_linear_part(x) {
        Ok(l) => l,
        Err(e) => return Report::input_error(name, degree, &e.to_string()),
    };
    let decomp = match toric_decompose(&lin.diag) {
        Ok(d) => d,
        Err(e) => return Report::input_error(name, degree, &e.to_string()),
    };
    let mut report = Report::new(name, degree);

    for (k, p) in problem.integrals.iter().enumerate() {
        let label = k + 1;
        match verify_darboux_conservation(x, p, &decomp, degree) {
            Err(e) => report.check(
                &format!("integral_{label}"),
                Status::Fail,
                Some(e.to_string()),
            ),
            Ok(c) => {
                report.output(
                    &format!("integral_{label}_cofactors"),
                    Value::Array(c.cofactors.iter().map(series_value).collect()),
                );
                let (v, d) = identity_verdict(&c.cofactor_sum);
                report.check(&format!("integral_{label}_weighted_cofactor_sum"), v, d);
                let (v, d) = identity_verdict(&c.constant_sum);
                report.check(&format!("integral_{label}_constant_cofactor_sum"), v, d);
                let (v, d) = identity_verdict(&c.semisimple_integral);
                report.check(&format!("integral_{label}_semisimple_invariance"), v, d);
                for (i, t) in c.torus_integrals.iter().enumerate() {
                    let (v, d) = identity_verdict(t);
                    report.check(
                        &format!("integral_{label}_torus_invariance_{}", i + 1),
                        v,
                        d,
                    );
                }
            }
        }
    }

    for (k, y) in problem.commuting_fields.iter().enumerate() {
        let label = k + 1;
        let y = RationalVectorField::new(
            y.numer().truncated(degree),
            y.denom().truncated(degree),
        );
        match verify_commutant_conservation(x, &y, &decomp, degree) {
            Err(e) => report.check(
                &format!("commutant_{label}"),
                Status::Fail,
                Some(e.to_string()),
            ),
            Ok(c) => {
                report.output(
                    &format!("commutant_{label}_denominator_cofactor"),
                    series_value(&c.denominator_cofactor),
                );
                for (i, t) in c.torus_denominator.iter().enumerate() {
                    let (v, d) = identity_verdict(t);
                    report.check(
                        &format!("commutant_{label}_denominator_eigen_{}", i + 1),
                        v,
                        d,
                    );
                }
                for (i, t) in c.torus_numerator.iter().enumerate() {
                    let (v, d) = identity_verdict(t);
                    report.check(
                        &format!("commutant_{label}_numerator_bracket_{}", i + 1),
                        v,
                        d,
                    );
                }
                for (i, t) in c.torus_commuting.iter().enumerate() {
                    let (v, d) = identity_verdict(t);
                    report.check(
                        &format!("commutant_{label}_torus_commuting_{}", i + 1),
                        v,
                        d,
                    );
                }
            }
        }
    }
    report
}

fn run_check_darboux(
    name: &str,
    problem: &ProblemFile,
    x: &VectorFieldJet,
    degree: u32,
) -> Report {
    let n = problem.dimension;
    let p = 1 + problem.commuting_fields.len();
    let q = problem.integrals.len();
    if p + q != n {
        return Report::input_error(
            name,
            degree,
            &format!("p + q must equal the dimension: p = {p}, q = {q}, n = {n}"),
        );
    }
    let mut fields = vec![RationalVectorField::polynomial(x.clone())];
    for y in &problem.commuting_fields {
        fields.push(RationalVectorField::new(
            y.numer().truncated(degree),
            y.denom().truncated(degree),
        ));
    }
    let cert = integrability_certificate(&fields, &problem.integrals, degree);

    let mut report = Report::new(name, degree);
    report.output("p", json!(cert.p));
    report.output("q", json!(cert.q));
    for pair in &cert.commuting.pairs {
        let (v, d) = pair_verdict(pair);
        report.check(
            &format!("commuting_{}_{}", pair.left + 1, pair.right + 1),
            v,
            d,
        );
    }
    for pair in &cert.integrals.pairs {
        let (v, d) = pair_verdict(pair);
        report.check(
            &format!("integral_{}_{}", pair.left + 1, pair.right + 1),
            v,
            d,
        );
    }
    let ind = &cert.independence;
    report.output("points_tried", json!(ind.points_tried));
    report.output("integral_rank", json!(ind.integral_rank));
    report.output("field_rank", json!(ind.field_rank));
    if let Some(w) = &ind.witness {
        report.output("witness", scalars_value(w));
    }
    match ind.verdict {
        Verdict::Pass => report.check("independence", Status::Pass, None),
        Verdict::Inconclusive => report.check(
            "independence",
            Status::Inconclusive,
            Some(format!(
                "no witness among {} sampled rational points; best ranks q = {}, p = {}",
                ind.points_tried, ind.integral_rank, ind.field_rank
            )),
        ),
        Verdict::Fail => report.check("independence", Status::Fail, None),
    }
    report
}

fn pair_verdict(pair: &crate::darboux::PairCheck) -> (Status, Option<String>) {
    if pair.check.passed {
        (Status::Pass, None)
    } else {
        let detail = pair
            .residual
            .as_ref()
            .map(|r| format!("lowest residual term: {r}"));
        (Status::Fail, detail)
    }
}

fn run_find_semi_invariants(
    name: &str,
    x: &VectorFieldJet,
    degree: u32,
    search_degree: u32,
) -> Report {
    if search_degree == 0 || search_degree > degree {
        return Report::input_error(
            name,
            degree,
            &format!("search degree must lie in 1..={degree}"),
        );
    }
    if let Err(e) = validate_linear_part(x) {
        return Report::input_error(name, degree, &e.to_string());
    }
    let found = find_semi_invariants(x, search_degree, degree);
    let mut report = Report::new(name, degree);
    report.output("search_degree", json!(search_degree));
    report.output("count", json!(found.len()));
    report.output(
        "semi_invariants",
        Value::Array(
            found
                .iter()
                .map(|si| {
                    json!({
                        "cofactor": render_series(si.cofactor()),
                        "function": render_series(si.function()),
                    })
                })
                .collect(),
        ),
    );
    report
}
