//! Report structures for check campaigns: per-sample residual records,
//! pass/fail/error outcomes, and a content hash that is invariant under
//! re-runs (volatile metadata is excluded from the hashed projection).

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// One evaluated sample of a residual field.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleRecord {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub residual: f64,
}

/// Residuals of one equation over a sample set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidualReport {
    pub equation: String,
    pub samples: Vec<SampleRecord>,
    pub max: f64,
    pub mean: f64,
    pub tol: f64,
    pub pass: bool,
}

impl ResidualReport {
    /// Assemble from per-sample residuals; max and mean are reduced
    /// sequentially so thread count cannot change them.
    pub fn from_samples(
        equation: &str,
        samples: Vec<SampleRecord>,
        tol: f64,
    ) -> ResidualReport {
        let max = samples.iter().fold(0.0f64, |a, s| a.max(s.residual.abs()));
        let mean = if samples.is_empty() {
            0.0
        } else {
            samples.iter().map(|s| s.residual.abs()).sum::<f64>() / samples.len() as f64
        };
        ResidualReport {
            equation: equation.to_string(),
            samples,
            max,
            mean,
            tol,
            pass: max <= tol,
        }
    }
}

/// A formula-versus-oracle comparison at one sample, for gap exports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GapRecord {
    pub check_id: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub formula: f64,
    pub oracle: f64,
    pub gap: f64,
}

/// How a check ended. An error (bad configuration, evaluation breakdown)
/// is distinct from a failed tolerance.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "status", content = "message", rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Error(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: String,
    pub status: CheckStatus,
    pub reports: Vec<ResidualReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gaps: Vec<GapRecord>,
    /// Wall-clock duration; volatile, excluded from the content hash.
    pub elapsed_ms: u64,
}

impl CheckOutcome {
    pub fn error(id: &str, message: String) -> CheckOutcome {
        CheckOutcome {
            id: id.to_string(),
            status: CheckStatus::Error(message),
            reports: Vec::new(),
            warnings: Vec::new(),
            gaps: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn from_reports(id: &str, reports: Vec<ResidualReport>) -> CheckOutcome {
        let pass = reports.iter().all(|r| r.pass);
        CheckOutcome {
            id: id.to_string(),
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            reports,
            warnings: Vec::new(),
            gaps: Vec::new(),
            elapsed_ms: 0,
        }
    }
}

/// Volatile run metadata, not part of the content hash.
#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct RunMeta {
    pub unix_time: f64,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignReport {
    pub version: u32,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
    pub meta: RunMeta,
    pub content_hash: String,
}

/// Hash-relevant projection: everything that describes the mathematical
/// outcome, nothing that describes the clock.
#[derive(Serialize)]
struct HashView<'a> {
    version: u32,
    seed: u64,
    checks: Vec<CheckView<'a>>,
}

#[derive(Serialize)]
struct CheckView<'a> {
    id: &'a str,
    status: &'a CheckStatus,
    reports: &'a [ResidualReport],
    warnings: &'a [String],
    gaps: &'a [GapRecord],
}

impl CampaignReport {
    pub fn new(version: u32, seed: u64, checks: Vec<CheckOutcome>, meta: RunMeta) -> CampaignReport {
        let mut r = CampaignReport {
            version,
            seed,
            checks,
            meta,
            content_hash: String::new(),
        };
        r.content_hash = r.compute_hash();
        r
    }

    pub fn compute_hash(&self) -> String {
        let view = HashView {
            version: self.version,
            seed: self.seed,
            checks: self
                .checks
                .iter()
                .map(|c| CheckView {
                    id: &c.id,
                    status: &c.status,
                    reports: &c.reports,
                    warnings: &c.warnings,
                    gaps: &c.gaps,
                })
                .collect(),
        };
        let bytes = serde_json::to_vec(&view).expect("hash view serializes");
        let digest = Sha256::digest(&bytes);
        let mut out = String::with_capacity(64);
        for b in digest {
            out.push_str(&format!("{b:02x}"));
        }
        out
    }

    /// True when no check failed its tolerance. Errors are reported
    /// separately and do not count as failures.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn any_errored(&self) -> bool {
        self.checks
            .iter()
            .any(|c| matches!(c.status, CheckStatus::Error(_)))
    }
}

/// Gap records as CSV; vector slots are semicolon-joined so the row
/// layout stays fixed across dimensions.
/// Pretty-printed JSON for a report, one canonical serialization for the
/// CLI and the C ABI.
pub fn to_json(rep: &CampaignReport) -> crate::Result<String> {
    serde_json::to_string_pretty(rep)
        .map_err(|e| crate::Error::Eval(format!("report serialization: {e}")))
}

/// Published JSON schema for campaign reports. Emitted reports validate
/// against it; the round trip is covered by an integration test.
pub const REPORT_SCHEMA: &str = r##"{
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "CampaignReport",
  "type": "object",
  "required": ["version", "seed", "checks", "meta", "content_hash"],
  "additionalProperties": false,
  "properties": {
    "version": { "type": "integer", "minimum": 1 },
    "seed": { "type": "integer", "minimum": 0 },
    "checks": { "type": "array", "items": { "$ref": "#/definitions/CheckOutcome" } },
    "meta": {
      "type": "object",
      "required": ["unix_time", "elapsed_ms"],
      "additionalProperties": false,
      "properties": {
        "unix_time": { "type": "number" },
        "elapsed_ms": { "type": "integer", "minimum": 0 }
      }
    },
    "content_hash": { "type": "string", "pattern": "^[0-9a-f]{64}$" }
  },
  "definitions": {
    "CheckOutcome": {
      "type": "object",
      "required": ["id", "status", "reports", "elapsed_ms"],
      "additionalProperties": false,
      "properties": {
        "id": { "type": "string" },
        "status": {
          "type": "object",
          "required": ["status"],
          "additionalProperties": false,
          "properties": {
            "status": { "enum": ["pass", "fail", "error"] },
            "message": { "type": "string" }
          }
        },
        "reports": { "type": "array", "items": { "$ref": "#/definitions/ResidualReport" } },
        "warnings": { "type": "array", "items": { "type": "string" } },
        "gaps": { "type": "array", "items": { "$ref": "#/definitions/GapRecord" } },
        "elapsed_ms": { "type": "integer", "minimum": 0 }
      }
    },
    "ResidualReport": {
      "type": "object",
      "required": ["equation", "samples", "max", "mean", "tol", "pass"],
      "additionalProperties": false,
      "properties": {
        "equation": { "type": "string" },
        "samples": { "type": "array", "items": { "$ref": "#/definitions/SampleRecord" } },
        "max": { "type": "number" },
        "mean": { "type": "number" },
        "tol": { "type": "number", "exclusiveMinimum": 0 },
        "pass": { "type": "boolean" }
      }
    },
    "SampleRecord": {
      "type": "object",
      "required": ["x", "y", "residual"],
      "additionalProperties": false,
      "properties": {
        "x": { "type": "array", "items": { "type": "number" } },
        "y": { "type": "array", "items": { "type": "number" } },
        "residual": { "type": "number" }
      }
    },
    "GapRecord": {
      "type": "object",
      "required": ["check_id", "x", "y", "formula", "oracle", "gap"],
      "additionalProperties": false,
      "properties": {
        "check_id": { "type": "string" },
        "x": { "type": "array", "items": { "type": "number" } },
        "y": { "type": "array", "items": { "type": "number" } },
        "formula": { "type": "number" },
        "oracle": { "type": "number" },
        "gap": { "type": "number" }
      }
    }
  }
}
"##;

pub fn gaps_to_csv(gaps: &[GapRecord]) -> String {
    let mut out = String::from("check_id,x,y,formula,oracle,gap\n");
    for g in gaps {
        let xs = join(&g.x);
        let ys = join(&g.y);
        out.push_str(&format!(
            "{},{},{},{:.17e},{:.17e},{:.17e}\n",
            g.check_id, xs, ys, g.formula, g.oracle, g.gap
        ));
    }
    out
}

/// Trajectory as CSV with columns t, x^1..x^n, y^1..y^n, L.
pub fn trajectory_to_csv(tr: &crate::geodesic::Trajectory) -> String {
    let n = tr.x[0].len();
    let mut header = String::from("t");
    for i in 1..=n {
        header.push_str(&format!(",x{i}"));
    }
    for i in 1..=n {
        header.push_str(&format!(",y{i}"));
    }
    header.push_str(",L\n");
    let mut out = header;
    for k in 0..tr.t.len() {
        out.push_str(&format!("{:.17e}", tr.t[k]));
        for v in tr.x[k].iter().chain(tr.y[k].iter()) {
            out.push_str(&format!(",{v:.17e}"));
        }
        out.push_str(&format!(",{:.17e}\n", tr.l[k]));
    }
    out
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|c| format!("{c:.17e}"))
        .collect::<Vec<_>>()
        .join(";")
}
