//! Problem files and reports for the `foliation-kit` binary.
//!
//! A problem file is JSON with `schema: 1`. Exact values are written as text
//! (rationals `a/b`, polynomials in the parser grammar), complex numbers as
//! `[re, im]`. Reports are deterministic for a given input and seed; timings are
//! only included on request.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::brieskorn::{decompose, hf_basis, is_relatively_exact, p1q1_form, relative_module, DecomposeOptions};
use crate::error::{Error, Result};
use crate::foliation::{
    alpha0, check_conditions_with, euler_check, exponents_for, milnor_f, random_form, sample_generic, RationalFirstIntegral,
};
use crate::periods::{critical_values, Tolerances};
use crate::poly::{DifferentialForm, Poly, Rat, Vars};
use crate::pullback::{
    jacobian_transport, melnikov_at_tangency, morphism_is_generic, omega_e, omega_pl, omega_w, p1_lemma, p1_remark,
    q1_lemma, q1_remark, comparable_witness, rank_account, identity_3_32, DeformationDirection, Morphism,
};

pub const SCHEMA: u32 = 1;
/// Attempts when sampling random generic data.
pub const RESAMPLE_ATTEMPTS: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Check,
    Milnor,
    Basis,
    Decompose,
    Exactness,
    PullbackTangent,
    #[serde(rename = "verify-332")]
    Verify332,
    Melnikov,
    CriticalValues,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum InstanceSpec {
    Given {
        #[serde(rename = "P")]
        p_poly: String,
        #[serde(rename = "Q")]
        q_poly: String,
        p: Option<u32>,
        q: Option<u32>,
    },
    Random {
        random: RandomInstance,
    },
}

#[derive(Clone, Debug, Deserialize)]
pub struct RandomInstance {
    pub m: u32,
    pub n: u32,
    #[serde(default = "default_bound")]
    pub bound: i64,
}

fn default_bound() -> i64 {
    5
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum MorphismSpec {
    Given {
        #[serde(rename = "R")]
        r: String,
        #[serde(rename = "S")]
        s: String,
        #[serde(rename = "T")]
        t: String,
    },
    Random {
        random: RandomMorphism,
    },
}

#[derive(Clone, Debug, Deserialize)]
pub struct RandomMorphism {
    pub s: u32,
    #[serde(default = "default_bound")]
    pub bound: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum DeformationSpec {
    Given {
        #[serde(rename = "F1")]
        f1: [String; 3],
        alpha1: Option<[String; 3]>,
    },
    Random {
        random: RandomDeformation,
    },
}

#[derive(Clone, Debug, Deserialize)]
pub struct RandomDeformation {
    #[serde(default = "default_bound")]
    pub bound: i64,
    #[serde(default = "yes")]
    pub alpha1: bool,
}

fn yes() -> bool {
    true
}

/// `(dx · a + dy · b) / denominator^order` in the first two variables.
#[derive(Clone, Debug, Deserialize)]
pub struct FormSpec {
    pub dx: String,
    pub dy: String,
    pub denominator: Option<String>,
    #[serde(default)]
    pub order: u32,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default)]
pub struct MelnikovSpec {
    pub samples: usize,
    /// Radius of the `t` circle, relative to `max(1, |c|)`.
    pub radius: f64,
}

impl Default for MelnikovSpec {
    fn default() -> Self {
        MelnikovSpec { samples: 3, radius: 1e-3 }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct ProblemFile {
    pub schema: u32,
    /// Three names for homogeneous data, two for affine data. Defaults to `x, y, z`.
    pub variables: Option<Vec<String>>,
    #[serde(flatten)]
    pub instance: InstanceSpec,
    pub morphism: Option<MorphismSpec>,
    pub deformation: Option<DeformationSpec>,
    pub alpha: Option<FormSpec>,
    pub commands: Vec<Command>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
    #[serde(default)]
    pub decompose: DecomposeOptions,
    #[serde(default)]
    pub melnikov: MelnikovSpec,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Overrides the problem file's seed.
    pub seed: Option<u64>,
    /// Overrides the problem file's tolerances.
    pub tolerances: Option<Tolerances>,
    /// Adds wall-clock timings, which makes the report non-reproducible.
    pub timing: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub input_sha256: String,
    pub seed: u64,
    pub version: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandBlock {
    pub command: Command,
    pub status: &'static str,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub provenance: Provenance,
    pub instance: Value,
    pub results: Vec<CommandBlock>,
    pub exit_code: i32,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// 1 for a failed identity, 2 for bad input, 3 for exhausted search or numeric breakdown.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) => 1,
        Error::EscalationCap { .. } | Error::Numeric(_) => 3,
        _ => 2,
    }
}

fn status(code: i32) -> &'static str {
    match code {
        0 => "ok",
        1 => "verification-failure",
        2 => "input-error",
        _ => "resource-cap",
    }
}

/// Input error dominates, then verification failure, then resource caps.
fn combine(codes: impl Iterator<Item = i32>) -> i32 {
    let codes: Vec<i32> = codes.collect();
    [2, 1, 3].into_iter().find(|c| codes.contains(c)).unwrap_or(0)
}

/// Everything derived from a problem file before commands run.
struct Context {
    vars3: Vars,
    vars2: Vars,
    f: RationalFirstIntegral,
    morphism: Option<Morphism>,
    direction: Option<DeformationDirection>,
    alpha: Option<DifferentialForm>,
    tol: Tolerances,
    decompose: DecomposeOptions,
    melnikov: MelnikovSpec,
    seed: u64,
}

fn form_json(w: &DifferentialForm, vars: &Vars) -> Value {
    json!({
        "degree": w.degree(),
        "coefficients": w.coeffs().iter().map(|c| vars.format(c)).collect::<Vec<_>>(),
        "divisor": vars.format(w.divisor()),
        "pole_order": w.pole_order(),
    })
}

fn parse3(vars: &Vars, texts: &[String; 3]) -> Result<[Poly; 3]> {
    Ok([vars.parse(&texts[0])?, vars.parse(&texts[1])?, vars.parse(&texts[2])?])
}

impl Context {
    fn build(problem: &ProblemFile, opts: &RunOptions, log: &mut Vec<String>) -> Result<Context> {
        if problem.schema != SCHEMA {
            return Err(Error::Invalid(format!("unsupported schema {}; expected {SCHEMA}", problem.schema)));
        }
        let seed = opts.seed.or(problem.seed).unwrap_or(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let names = problem.variables.clone().unwrap_or_else(|| vec!["x".into(), "y".into(), "z".into()]);
        let (vars3, vars2, affine_input) = match names.len() {
            3 => (Vars::new(&names), Vars::new(&names[..2]), false),
            2 => (Vars::new(&[names[0].as_str(), names[1].as_str(), "z"]), Vars::new(&names), true),
            k => return Err(Error::Invalid(format!("expected 2 or 3 variables, got {k}"))),
        };
        let f = match &problem.instance {
            InstanceSpec::Given { p_poly, q_poly, p, q } => {
                let vars = if affine_input { &vars2 } else { &vars3 };
                let (pp, qq) = (vars.parse(p_poly)?, vars.parse(q_poly)?);
                let (m, n) = (pp.degree().unwrap_or(0), qq.degree().unwrap_or(0));
                let (de_p, de_q) = exponents_for(m, n);
                let (p, q) = (p.unwrap_or(de_p), q.unwrap_or(de_q));
                if affine_input {
                    RationalFirstIntegral::from_affine(pp, qq, p, q)?
                } else {
                    RationalFirstIntegral::new(pp, qq, p, q)?
                }
            }
            InstanceSpec::Random { random } => {
                let (f, attempts) = sample_generic(random.m, random.n, random.bound, RESAMPLE_ATTEMPTS, &mut rng)?;
                log.extend(attempts);
                f
            }
        };
        let morphism = match &problem.morphism {
            None => None,
            Some(MorphismSpec::Given { r, s, t }) => {
                Some(Morphism::new(vars3.parse(r)?, vars3.parse(s)?, vars3.parse(t)?)?)
            }
            Some(MorphismSpec::Random { random }) => Some(sample_morphism(&f, random, &mut rng, log)?),
        };
        let a = f.m() + f.n() - 2;
        let direction = match (&problem.deformation, &morphism) {
            (None, _) => None,
            (Some(_), None) => return Err(Error::Invalid("a deformation needs a morphism".into())),
            (Some(DeformationSpec::Given { f1, alpha1 }), Some(mo)) => {
                let f1 = parse3(&vars3, f1)?;
                let alpha1 = alpha1.as_ref().map(|w| parse3(&vars3, w).map(|c| DifferentialForm::one_form(c.to_vec()))).transpose()?;
                Some(DeformationDirection::new(f1, alpha1, mo.s(), a)?)
            }
            (Some(DeformationSpec::Random { random }), Some(mo)) => {
                Some(DeformationDirection::random(mo.s(), a, random.bound, random.alpha1, &mut rng))
            }
        };
        let alpha = problem
            .alpha
            .as_ref()
            .map(|w| -> Result<DifferentialForm> {
                let num = DifferentialForm::one_form(vec![vars2.parse(&w.dx)?, vars2.parse(&w.dy)?]);
                Ok(match &w.denominator {
                    Some(d) if w.order > 0 => DifferentialForm::rational(num, &vars2.parse(d)?, w.order),
                    _ => num,
                })
            })
            .transpose()?;
        Ok(Context {
            vars3,
            vars2,
            f,
            morphism,
            direction,
            alpha,
            tol: opts.tolerances.clone().or_else(|| problem.tolerances.clone()).unwrap_or_default(),
            decompose: problem.decompose.clone(),
            melnikov: problem.melnikov.clone(),
            seed,
        })
    }

    fn instance_json(&self, log: &[String]) -> Value {
        let mut v = json!({
            "P": self.vars3.format(self.f.p_homogeneous()),
            "Q": self.vars3.format(self.f.q_homogeneous()),
            "p": self.f.p(),
            "q": self.f.q(),
            "m": self.f.m(),
            "n": self.f.n(),
        });
        if let Some(mo) = &self.morphism {
            let c = mo.components();
            v["morphism"] = json!({
                "R": self.vars3.format(&c[0]),
                "S": self.vars3.format(&c[1]),
                "T": self.vars3.format(&c[2]),
                "s": mo.s(),
            });
        }
        if let Some(dir) = &self.direction {
            v["deformation"] = json!({
                "F1": dir.f1.iter().map(|c| self.vars3.format(c)).collect::<Vec<_>>(),
                "alpha1": dir.alpha1.as_ref().map(|w| form_json(w, &self.vars3)),
            });
        }
        if !log.is_empty() {
            v["sampling_log"] = json!(log);
        }
        v
    }

    fn morphism(&self) -> Result<&Morphism> {
        self.morphism.as_ref().ok_or_else(|| Error::Invalid("this command needs a morphism".into()))
    }

    fn direction(&self) -> Result<&DeformationDirection> {
        self.direction.as_ref().ok_or_else(|| Error::Invalid("this command needs a deformation".into()))
    }

    fn alpha(&self) -> Result<&DifferentialForm> {
        self.alpha.as_ref().ok_or_else(|| Error::Invalid("this command needs `alpha`".into()))
    }

    fn run(&self, command: Command) -> Result<(Value, bool)> {
        match command {
            Command::Check => {
                let report = check_conditions_with(&self.f, &self.tol);
                Ok((json!({ "all_hold": report.all_hold(), "failures": report.failures(), "flags": report }), report.all_hold()))
            }
            Command::Milnor => self.milnor(),
            Command::Basis => {
                let module = relative_module(&self.f)?;
                let basis = hf_basis(&module)?;
                let x = Vars::new(&[self.vars2.names()[0].as_str(), self.vars2.names()[1].as_str(), "zeta"]);
                Ok((
                    json!({
                        "dimension": module.dimension,
                        "monomials": basis.monomials.iter().map(|m| self.vars2.format(&Poly::monomial(m.clone(), Rat::from_integer(1.into())))).collect::<Vec<_>>(),
                        "forms": basis.forms.iter().map(|w| form_json(w, &self.vars2)).collect::<Vec<_>>(),
                        "zero_degrees": basis.zero_degrees(),
                        "standard_monomials": module.standard.iter().map(|m| x.format(&Poly::monomial(m.clone(), Rat::from_integer(1.into())))).collect::<Vec<_>>(),
                    }),
                    true,
                ))
            }
            Command::Decompose => {
                let basis = hf_basis(&relative_module(&self.f)?)?;
                let d = decompose(self.alpha()?, &self.f, &basis, &self.decompose)?;
                let t = Vars::new(&["t"]);
                Ok((
                    json!({
                        "C": d.coefficients.iter().map(|c| t.format(c)).collect::<Vec<_>>(),
                        "zeta1": form_json(&d.zeta1, &self.vars2),
                        "zeta2": form_json(&d.zeta2, &self.vars2),
                        "degree_bounds": d.degree_bounds,
                        "degree_bounds_hold": d.degree_bound_holds(),
                        "residual_zero": d.residual.is_zero(),
                        "pole_cap": d.pole_cap,
                        "round": d.round,
                        "system": [d.system.0, d.system.1],
                    }),
                    d.residual.is_zero() && d.degree_bound_holds(),
                ))
            }
            Command::Exactness => {
                let cert = is_relatively_exact(self.alpha()?, &self.f, &self.decompose)?;
                Ok((
                    json!({
                        "valid": cert.valid,
                        "g": form_json(&cert.g, &self.vars2),
                        "T": form_json(&cert.t, &self.vars2),
                        "pole_orders": [cert.pole_orders.0, cert.pole_orders.1],
                    }),
                    true,
                ))
            }
            Command::PullbackTangent => self.pullback_tangent(),
            Command::Verify332 => {
                let id = identity_3_32(&self.f, self.morphism()?, &self.direction()?.f1)?;
                let holds = id.lhs == id.rhs;
                Ok((json!({ "holds": holds, "lhs": form_json(&id.lhs, &self.vars3), "rhs": form_json(&id.rhs, &self.vars3) }), holds))
            }
            Command::Melnikov => self.melnikov(),
            Command::CriticalValues => {
                let data = critical_values(&self.f, &self.tol)?;
                Ok((
                    json!({
                        "count": data.count(),
                        "milnor": data.milnor,
                        "count_matches_milnor": data.count_matches_milnor(),
                        "min_separation": data.min_separation(),
                        "values": data.values,
                        "points": data.points,
                        "delta_coefficients": data.delta_coefficients(),
                    }),
                    true,
                ))
            }
        }
    }

    fn milnor(&self) -> Result<(Value, bool)> {
        let mu_f = milnor_f(self.f.m(), self.f.n())?;
        let mut v = json!({ "m": self.f.m(), "n": self.f.n(), "mu_f": mu_f });
        match relative_module(&self.f) {
            Ok(module) => {
                v["module_dimension"] = json!(module.dimension);
                v["module_matches_mu_f"] = json!(module.dimension as u64 == mu_f);
            }
            Err(e) => v["module_error"] = json!(e.to_string()),
        }
        if let Some(mo) = &self.morphism {
            let r = rank_account(self.f.m(), self.f.n(), mo.s(), None)?;
            v["s"] = json!(mo.s());
            v["mu"] = json!(r.mu);
            v["rho_D"] = json!(r.rho_d);
            v["ker_rank"] = json!(r.ker_rank);
            v["h_rank"] = json!(r.h_rank);
        }
        Ok((v, true))
    }

    fn pullback_tangent(&self) -> Result<(Value, bool)> {
        let (f, mo, dir) = (&self.f, self.morphism()?, self.direction()?);
        let a0 = alpha0(f);
        let w = omega_w(mo, dir, &a0)?;
        let pl = omega_pl(f, mo, &dir.f1);
        let e = omega_e(f, mo, &dir.f1);
        let pulled_a1 = match &dir.alpha1 {
            Some(a1) => mo.pull_form(a1)?,
            None => DifferentialForm::zero(3, 1),
        };
        let flipped = p1q1_form(f, mo, &p1_remark(f, mo, &dir.f1), &-&q1_remark(f, mo, &dir.f1));
        let first_order = w.equals(&flipped.add(&pulled_a1));
        let euler = euler_check(&w)?;
        let (lambda, rho) = jacobian_transport(f, mo)?;
        let ok = first_order && euler;
        Ok((
            json!({
                "omega_w": form_json(&w, &self.vars3),
                "omega_pl": form_json(&pl, &self.vars3),
                "omega_e": form_json(&e, &self.vars3),
                "P1_remark": self.vars3.format(&p1_remark(f, mo, &dir.f1)),
                "Q1_remark": self.vars3.format(&q1_remark(f, mo, &dir.f1)),
                "P1_lemma": self.vars3.format(&p1_lemma(f, mo, &dir.f1)),
                "Q1_lemma": self.vars3.format(&q1_lemma(f, mo, &dir.f1)),
                "omega_w_euler": euler,
                "omega_w_is_first_order_pullback": first_order,
                "omega_w_matches_printed_omega_pl": w.equals(&pl.add(&pulled_a1)),
                "lambda": lambda.iter().map(|c| self.vars3.format(c)).collect::<Vec<_>>(),
                "rho": rho.iter().map(|c| self.vars3.format(c)).collect::<Vec<_>>(),
                "morphism_generic": morphism_is_generic(f, mo),
            }),
            ok,
        ))
    }

    fn melnikov(&self) -> Result<(Value, bool)> {
        let (f, mo, dir) = (&self.f, self.morphism()?, self.direction()?);
        let w = omega_w(mo, dir, &alpha0(f))?;
        let spec = &self.melnikov;
        let tangent = melnikov_at_tangency(f, mo, &w, spec.samples, spec.radius, &self.tol)?;
        // scale from a seeded non-tangent direction of the same degree and coefficient size
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x6d31);
        let witness_form = comparable_witness(&w, &mut rng);
        let witness = melnikov_at_tangency(f, mo, &witness_form, spec.samples, spec.radius, &self.tol)?;
        let scale = witness.max_abs().max(1e-12);
        let vanishes = tangent.max_abs() < self.tol.melnikov * scale;
        Ok((
            json!({
                "center": tangent.center,
                "t": tangent.ts,
                "M1": tangent.values,
                "max_abs": tangent.max_abs(),
                "witness_max_abs": witness.max_abs(),
                "relative": tangent.max_abs() / scale,
                "tolerance": self.tol.melnikov,
                "vanishes": vanishes,
            }),
            vanishes,
        ))
    }
}

fn sample_morphism(f: &RationalFirstIntegral, spec: &RandomMorphism, rng: &mut ChaCha8Rng, log: &mut Vec<String>) -> Result<Morphism> {
    for k in 1..=RESAMPLE_ATTEMPTS {
        let [r, s, t] = [0; 3].map(|_| random_form(3, spec.s, spec.bound, rng));
        match Morphism::new(r, s, t) {
            Ok(mo) if morphism_is_generic(f, &mo) => {
                log.push(format!("morphism attempt {k}: accepted"));
                return Ok(mo);
            }
            Ok(_) => log.push(format!("morphism attempt {k}: rejected (V(J) meets V(F*λ))")),
            Err(e) => log.push(format!("morphism attempt {k}: rejected ({e})")),
        }
    }
    Err(Error::Genericity(format!("no generic morphism of degree {} in {RESAMPLE_ATTEMPTS} attempts", spec.s)))
}

/// Parses `input` as a problem file and runs every command in order.
pub fn run(input: &str, opts: &RunOptions) -> Result<Report> {
    let problem: ProblemFile = serde_json::from_str(input)?;
    let input_sha256 = Sha256::digest(input.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    let mut log = Vec::new();
    let ctx = Context::build(&problem, opts, &mut log)?;
    let results: Vec<CommandBlock> = problem
        .commands
        .iter()
        .map(|&command| {
            let start = Instant::now();
            let outcome = ctx.run(command);
            let seconds = opts.timing.then(|| start.elapsed().as_secs_f64());
            match outcome {
                Ok((result, ok)) => {
                    // failed genericity conditions make the input unusable, not an identity wrong
                    let code = match (ok, command) {
                        (true, _) => 0,
                        (false, Command::Check) => 2,
                        (false, _) => 1,
                    };
                    CommandBlock { command, status: status(code), exit_code: code, result: Some(result), error: None, seconds }
                }
                Err(e) => {
                    let code = exit_code(&e);
                    CommandBlock { command, status: status(code), exit_code: code, result: None, error: Some(e.to_string()), seconds }
                }
            }
        })
        .collect();
    Ok(Report {
        schema: SCHEMA,
        provenance: Provenance { input_sha256, seed: ctx.seed, version: env!("CARGO_PKG_VERSION").to_string() },
        instance: ctx.instance_json(&log),
        exit_code: combine(results.iter().map(|b| b.exit_code)),
        results,
    })
}

/// Loads a tolerance record; missing fields keep their defaults.
pub fn load_tolerances(text: &str) -> Result<Tolerances> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(text: &str) -> Report {
        run(text, &RunOptions::default()).unwrap()
    }

    #[test]
    fn milnor_command_rank_numbers() {
        let r = run_ok(
            r#"{"schema":1,"random":{"m":3,"n":2},"morphism":{"random":{"s":2}},"commands":["milnor"],"seed":1}"#,
        );
        let v = r.results[0].result.as_ref().unwrap();
        assert_eq!(v["mu_f"], 10);
        assert_eq!(v["mu"], 57);
        assert_eq!(v["rho_D"], 17);
        assert_eq!(v["ker_rank"], 47);
    }

    #[test]
    fn decompose_basis_element() {
        let r = run_ok(r#"{"schema":1,"random":{"m":3,"n":2},"alpha":{"dx":"0","dy":"x"},"commands":["decompose"],"seed":2}"#);
        assert_eq!(r.exit_code, 0, "{}", r.to_json());
        let v = r.results[0].result.as_ref().unwrap();
        assert_eq!(v["C"][0], "1");
        assert!(v["C"].as_array().unwrap()[1..].iter().all(|c| c == "0"));
        assert_eq!(v["zeta1"]["coefficients"][0], "0");
        assert_eq!(v["zeta2"]["coefficients"][0], "0");
    }

    #[test]
    fn reports_are_reproducible() {
        let text = r#"{"schema":1,"random":{"m":3,"n":2},"morphism":{"random":{"s":2}},"deformation":{"random":{}},"commands":["verify-332","check"]}"#;
        let a = run(text, &RunOptions { seed: Some(9), ..Default::default() }).unwrap().to_json();
        let b = run(text, &RunOptions { seed: Some(9), ..Default::default() }).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"holds\": true"));
    }

    #[test]
    fn exit_codes() {
        assert!(matches!(run(r#"{"schema":2,"P":"x","Q":"y","commands":[]}"#, &RunOptions::default()), Err(e) if exit_code(&e) == 2));
        assert!(run("not json", &RunOptions::default()).is_err());
        let r = run_ok(r#"{"schema":1,"random":{"m":3,"n":2},"commands":["verify-332"]}"#);
        assert_eq!(r.exit_code, 2);
        assert_eq!(exit_code(&Error::Verification(String::new())), 1);
        assert_eq!(exit_code(&Error::EscalationCap { rounds: 1, pole_cap: 1, detail: String::new() }), 3);
        assert_eq!(combine([0, 3, 1].into_iter()), 1);
    }

    #[test]
    fn affine_input() {
        let r = run_ok(
            r#"{"schema":1,"variables":["u","v"],"P":"u^3 + v^3 + 1 + u*v","Q":"u^2 + 3*v^2 + 2 - u","commands":["check"]}"#,
        );
        assert_eq!(r.instance["m"], 3);
        assert!(r.instance["P"].as_str().unwrap().contains('z'));
    }
}
