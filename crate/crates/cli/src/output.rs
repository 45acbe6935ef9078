//! Output rendering: a fixed per-set record in table, CSV, or
//! line-delimited key=value form.

use clap::ValueEnum;

use cayley_ci::citester::{CiReport, Mode};
use cayley_ci::group::GroupSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Lines,
}

pub const CSV_HEADER: &str =
    "group,n,valency,mode,set,verdict,method,aut_order,normal,witness,rival_order";

/// One record about one connection set; the field list is stable across
/// formats.
#[derive(Debug, Clone)]
pub struct SetRow {
    pub group: String,
    pub n: u64,
    pub valency: usize,
    pub mode: String,
    pub set: String,
    pub verdict: String,
    pub method: String,
    pub aut_order: String,
    pub normal: String,
    pub witness: String,
    pub rival_order: String,
}

pub fn group_name(spec: &GroupSpec) -> String {
    match spec.kind() {
        cayley_ci::group::GroupKind::Dihedral => format!("dihedral:{}", spec.n()),
        cayley_ci::group::GroupKind::Cyclic => format!("cyclic:{}", spec.n()),
    }
}

impl SetRow {
    pub fn from_report(report: &CiReport, mode: Mode) -> SetRow {
        SetRow {
            group: group_name(&report.group),
            n: report.group.n(),
            valency: report.set.len(),
            mode: mode.to_string(),
            set: report.set.to_string(),
            verdict: report.verdict.to_string(),
            method: report.method.to_string(),
            aut_order: report.aut_order.to_string(),
            normal: report.is_normal_cayley.to_string(),
            witness: report
                .witness
                .as_ref()
                .map(|w| w.to_string())
                .unwrap_or_default(),
            rival_order: report
                .rival_subgroup
                .as_ref()
                .and_then(|r| r.order())
                .map(|o| o.to_string())
                .unwrap_or_default(),
        }
    }

    pub fn csv(&self) -> String {
        [
            csv_field(&self.group),
            self.n.to_string(),
            self.valency.to_string(),
            csv_field(&self.mode),
            csv_field(&self.set),
            csv_field(&self.verdict),
            csv_field(&self.method),
            csv_field(&self.aut_order),
            csv_field(&self.normal),
            csv_field(&self.witness),
            csv_field(&self.rival_order),
        ]
        .join(",")
    }

    pub fn line(&self) -> String {
        format!(
            "group={} n={} valency={} mode={} set={:?} verdict={} method={} aut_order={} normal={} witness={:?} rival_order={}",
            self.group,
            self.n,
            self.valency,
            self.mode,
            self.set,
            self.verdict,
            self.method,
            self.aut_order,
            self.normal,
            self.witness,
            self.rival_order,
        )
    }

    pub fn table_block(&self) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: &str| {
            if !v.is_empty() {
                out.push_str(&format!("{k:<12}{v}\n"));
            }
        };
        push("group", &self.group);
        push("set", &self.set);
        push("valency", &self.valency.to_string());
        push("mode", &self.mode);
        push("verdict", &self.verdict);
        push("method", &self.method);
        push("aut_order", &self.aut_order);
        push("normal", &self.normal);
        push("witness", &self.witness);
        push("rival_order", &self.rival_order);
        out
    }
}

/// Quotes a CSV field when it contains commas, quotes, or newlines.
fn csv_field(value: &str) -> String {
    if value.contains(['"', ',', '\n']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}
