//! JSON request dispatch behind the command-line tool.
//!
//! A request names a command and carries the ball and vectors it needs:
//!
//! ```json
//! {"command":"coderivative","ball":{"center":[0],"radius":1},"x":[1],"y":[-2]}
//! ```
//!
//! Every command except `sweep2d` answers with a JSON envelope,
//! `{"ok":true,"result":…}` or `{"ok":false,"error":{"code":…,"message":…}}`.
//! `sweep2d` answers with CSV.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coderivative::{regular_coderivative, set_membership, CoderivativeSet};
use crate::derivative::{frechet_map_with_tol, gateaux_with_tol};
use crate::error::Error;
use crate::hilbert::Vector;
use crate::oracle::{
    contingent_member, default_contingent_schedule, fd_directional, limsup_quotient,
    SamplingScheme, Verdict,
};
use crate::projection::{classify, try_project, Ball, DEFAULT_TAU};
use crate::suites::{self, SuiteName};
use crate::sweep::{sweep2d, GridSpec, Quantity};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Project,
    Classify,
    Gateaux,
    Graphical,
    Frechet,
    Coderivative,
    Membership,
    Verify,
    Sweep2d,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct Request {
    pub command: Option<Command>,
    pub ball: Option<Ball>,
    pub x: Option<Vector>,
    pub y: Option<Vector>,
    pub z: Option<Vector>,
    pub u: Option<Vector>,
    /// Classification tolerance.
    pub tau: Option<f64>,
    /// Membership tolerance; defaults to the set's scaled default.
    pub eps: Option<f64>,
    pub scheme: Option<SamplingScheme>,
    pub t_schedule: Option<Vec<f64>>,
    pub grid: Option<GridSpec>,
    pub quantity: Option<Quantity>,
    pub suite: Option<String>,
    pub count: Option<usize>,
    pub seed: Option<u64>,
}

/// A failed request: machine-readable code, message and exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: &'static str,
    pub message: String,
    pub exit_code: i32,
    pub details: Option<Value>,
}

impl Failure {
    fn input(code: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
            exit_code: EXIT_INPUT,
            details: None,
        }
    }

    fn verification(message: impl Into<String>, details: Value) -> Self {
        Failure {
            code: "verification_failed",
            message: message.into(),
            exit_code: EXIT_VERIFY,
            details: Some(details),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut error = json!({ "code": self.code, "message": self.message });
        if let Some(d) = &self.details {
            error["details"] = d.clone();
        }
        json!({ "ok": false, "error": error })
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotBoundary { .. } => "not_boundary",
            Error::NotDifferentiable => "not_differentiable",
            Error::NotTwoDimensional(_) => "not_two_dimensional",
            _ => "invalid_input",
        };
        Failure::input(code, e.to_string())
    }
}

/// Successful output of a request.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Json(Value),
    Csv(String),
}

impl Output {
    /// Text written to the output stream, newline-terminated.
    pub fn render(&self) -> String {
        match self {
            Output::Json(v) => format!("{}\n", json!({ "ok": true, "result": v })),
            Output::Csv(s) => s.clone(),
        }
    }
}

pub fn parse(text: &str) -> Result<Request, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::input("malformed_json", e.to_string()))
}

fn need<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T, Failure> {
    field
        .as_ref()
        .ok_or_else(|| Failure::input("missing_field", format!("missing field `{name}`")))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Executes a parsed request.
pub fn run(req: &Request) -> Result<Output, Failure> {
    let command = *need(&req.command, "command")?;
    let tau = req.tau.unwrap_or(DEFAULT_TAU);
    match command {
        Command::Project => {
            let ball = need(&req.ball, "ball")?;
            Ok(Output::Json(to_value(&try_project(ball, need(&req.x, "x")?)?)))
        }
        Command::Classify => {
            let ball = need(&req.ball, "ball")?;
            Ok(Output::Json(to_value(&classify(ball, need(&req.x, "x")?, tau)?)))
        }
        Command::Gateaux => {
            let ball = need(&req.ball, "ball")?;
            let u = req.u.as_ref().or(req.y.as_ref());
            let u = u.ok_or_else(|| Failure::input("missing_field", "missing field `u`"))?;
            Ok(Output::Json(to_value(&gateaux_with_tol(ball, need(&req.x, "x")?, u, tau)?)))
        }
        Command::Graphical => {
            let ball = need(&req.ball, "ball")?;
            let g = gateaux_with_tol(ball, need(&req.x, "x")?, need(&req.y, "y")?, tau)?;
            Ok(Output::Json(to_value(&CoderivativeSet::Singleton(g))))
        }
        Command::Frechet => {
            let ball = need(&req.ball, "ball")?;
            Ok(Output::Json(to_value(&frechet_map_with_tol(ball, need(&req.x, "x")?, tau)?)))
        }
        Command::Coderivative => {
            let ball = need(&req.ball, "ball")?;
            let set = regular_coderivative(ball, need(&req.x, "x")?, need(&req.y, "y")?, tau)?;
            Ok(Output::Json(to_value(&set)))
        }
        Command::Membership => {
            let ball = need(&req.ball, "ball")?;
            let z = need(&req.z, "z")?;
            let set = regular_coderivative(ball, need(&req.x, "x")?, need(&req.y, "y")?, tau)?;
            ball.check_dim(z)?;
            let eps = req.eps.unwrap_or_else(|| set.default_eps());
            let member = set_membership(&set, z, eps);
            Ok(Output::Json(json!({ "member": member, "eps": eps, "set": set })))
        }
        Command::Verify => verify(req, tau),
        Command::Sweep2d => {
            let ball = need(&req.ball, "ball")?;
            let grid = need(&req.grid, "grid")?;
            let quantity = *need(&req.quantity, "quantity")?;
            let fixed = match quantity {
                Quantity::GateauxField => req.u.as_ref().or(req.y.as_ref()),
                _ => req.y.as_ref(),
            };
            Ok(Output::Csv(sweep2d(ball, grid, quantity, fixed, tau)?))
        }
    }
}

/// `verify` has three forms: a named suite (`suite`), a coderivative
/// candidate checked by the limsup oracle (`ball`, `x`, `y`, `z`), and a
/// directional derivative checked by difference quotients (`ball`, `x`, `u`).
fn verify(req: &Request, tau: f64) -> Result<Output, Failure> {
    let seed = req.seed.unwrap_or(0);
    if let (Some(ball), Some(x), Some(y), Some(z)) = (&req.ball, &req.x, &req.y, &req.z) {
        let mut scheme = req.scheme.clone().unwrap_or_default();
        if let Some(s) = req.seed {
            scheme.seed = s;
        }
        let report = limsup_quotient(ball, x, y, z, &scheme)?;
        let value = to_value(&report);
        return match report.verdict {
            Verdict::ConsistentMember => Ok(Output::Json(value)),
            v => Err(Failure::verification(
                format!("candidate is not a verified member: {}", to_value(&v)),
                value,
            )),
        };
    }
    if let (Some(ball), Some(x), Some(u)) = (&req.ball, &req.x, &req.u) {
        let schedule = req.t_schedule.clone().unwrap_or_else(default_contingent_schedule);
        let g = gateaux_with_tol(ball, x, u, tau)?;
        let fd = fd_directional(ball, x, u, &schedule)?;
        let tangent = contingent_member(ball, x, u, &g, &schedule)?;
        let value = json!({ "gateaux": g, "estimate": fd.estimate, "deviations": fd.deviations, "tangent": tangent });
        return if tangent {
            Ok(Output::Json(value))
        } else {
            Err(Failure::verification("difference quotients do not converge to the Gâteaux derivative", value))
        };
    }

    let name: SuiteName = req
        .suite
        .as_deref()
        .unwrap_or("all")
        .parse()
        .map_err(|m: String| Failure::input("invalid_input", m))?;
    let reports = suites::run(name, seed, req.count)?;
    let passed = reports.iter().filter(|r| r.passed()).count();
    let summary = json!({
        "passed": passed,
        "failed": reports.len() - passed,
        "suites": reports,
    });
    if passed == reports.len() {
        Ok(Output::Json(summary))
    } else {
        Err(Failure::verification(
            format!("{} of {} suites failed", reports.len() - passed, reports.len()),
            summary,
        ))
    }
}

/// Parses and runs `text`, returning the rendered output and exit code.
pub fn handle(text: &str) -> (String, i32) {
    match parse(text).and_then(|req| run(&req)) {
        Ok(out) => (out.render(), EXIT_OK),
        Err(f) => (format!("{}\n", f.to_json()), f.exit_code),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok_result(text: &str) -> Value {
        let (out, code) = handle(text);
        assert_eq!(code, 0, "{out}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["ok"], json!(true));
        v["result"].clone()
    }

    #[test]
    fn coderivative_interval_example() {
        let r = ok_result(r#"{"command":"coderivative","ball":{"center":[0],"radius":1},"x":[1],"y":[-2]}"#);
        assert_eq!(r, json!({"tag":"segment","endpoints":[[-2.0],[0.0]]}));
    }

    #[test]
    fn graphical_interval_example() {
        let r = ok_result(r#"{"command":"graphical","ball":{"center":[0],"radius":1},"x":[1],"y":[3]}"#);
        assert_eq!(r, json!({"tag":"singleton","value":[0.0]}));
    }

    #[test]
    fn project_example() {
        let r = ok_result(r#"{"command":"project","ball":{"center":[0,0],"radius":1},"x":[3,4]}"#);
        assert_eq!(r, json!([0.6, 0.8]));
    }

    #[test]
    fn classify_and_frechet() {
        let r = ok_result(r#"{"command":"classify","ball":{"center":[1,1],"radius":2},"x":[4,5]}"#);
        assert_eq!(r, json!({"region":"exterior","signed_gap":3.0}));
        let r = ok_result(r#"{"command":"frechet","ball":{"center":[0,0],"radius":1},"x":[0,2]}"#);
        assert_eq!(r, json!({"kind":"scaled_ortho_projector","scale":0.5,"axis":[0.0,2.0]}));
        let (out, code) = handle(r#"{"command":"frechet","ball":{"center":[0,0],"radius":1},"x":[1,0]}"#);
        assert_eq!(code, EXIT_INPUT);
        assert!(out.contains("not_differentiable"));
    }

    #[test]
    fn membership_uses_scaled_default() {
        let r = ok_result(
            r#"{"command":"membership","ball":{"center":[0,0],"radius":1},"x":[1,0],"y":[-1,1],"z":[-0.5,1]}"#,
        );
        assert_eq!(r["member"], json!(true));
        let r = ok_result(
            r#"{"command":"membership","ball":{"center":[0,0],"radius":1},"x":[1,0],"y":[-1,1],"z":[0.5,1]}"#,
        );
        assert_eq!(r["member"], json!(false));
    }

    #[test]
    fn input_errors_exit_2() {
        let (out, code) = handle("{not json");
        assert_eq!(code, EXIT_INPUT);
        assert!(out.contains("malformed_json"));
        let (out, code) = handle(r#"{"command":"project","ball":{"center":[0,0],"radius":1},"x":[3]}"#);
        assert_eq!(code, EXIT_INPUT);
        assert!(out.contains("dimension_mismatch"));
        let (out, code) = handle(r#"{"command":"project","ball":{"center":[0,0],"radius":1}}"#);
        assert_eq!(code, EXIT_INPUT);
        assert!(out.contains("missing_field"));
        let (_, code) = handle(r#"{"command":"launch"}"#);
        assert_eq!(code, EXIT_INPUT);
    }

    #[test]
    fn verify_candidate_exit_codes() {
        let base = r#""command":"verify","ball":{"center":[0,0],"radius":1},"x":[1,0],"y":[-1,1]"#;
        let (out, code) = handle(&format!("{{{base},\"z\":[0,1]}}"));
        assert_eq!(code, EXIT_OK, "{out}");
        let (out, code) = handle(&format!("{{{base},\"z\":[0.5,1]}}"));
        assert_eq!(code, EXIT_VERIFY);
        assert!(out.contains("certified_non_member"));
    }

    #[test]
    fn verify_gateaux_form() {
        let (out, code) =
            handle(r#"{"command":"verify","ball":{"center":[0,0],"radius":1},"x":[1,0],"u":[1,1]}"#);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains(r#""tangent":true"#));
    }

    #[test]
    fn sweep_returns_csv() {
        let (out, code) = handle(
            r#"{"command":"sweep2d","ball":{"center":[0,0],"radius":1},"grid":{"x_range":[-2,2],"y_range":[-2,2],"step":0.5},"quantity":"region"}"#,
        );
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), 82);
        let (out, code) = handle(
            r#"{"command":"sweep2d","ball":{"center":[0],"radius":1},"grid":{"x_range":[-2,2],"y_range":[-2,2],"step":0.5},"quantity":"region"}"#,
        );
        assert_eq!(code, EXIT_INPUT);
        assert!(out.contains("not_two_dimensional"));
    }

    #[test]
    fn output_is_deterministic() {
        let req = r#"{"command":"verify","suite":"oracle","count":3,"seed":5}"#;
        assert_eq!(handle(req), handle(req));
    }
}
