//! Command implementations for the `bredon` binary. Each command returns an
//! [`Outcome`] instead of printing, so tests can drive them directly.

use std::fmt::Write as _;
use std::path::Path;

use bredon_core::dataset::{self, InventoryRow};
use bredon_core::bredon::bredon_homology;
use bredon_core::formulas::{k_from_bredon, split_from_complex, FormulaError, KHomology};
use bredon_core::qcomplex::{self, QuotientComplex};
use bredon_core::torsion::{classify, extract, reduce, torsion_homology, ComponentType, TorsionError, TorsionInventory};
use bredon_core::{AbelianGroup, Prime};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_MISMATCH: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Direct,
    Split,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(code: u8, msg: impl Into<String>) -> Self {
        Outcome { code, stdout: String::new(), stderr: msg.into() }
    }
}

/// Bredon homology in degrees 0..=2 plus the K-homology it determines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homology {
    pub h0: AbelianGroup,
    pub h1: AbelianGroup,
    pub h2: AbelianGroup,
    pub k0: AbelianGroup,
    pub k1: AbelianGroup,
}

impl Homology {
    fn new(h: [AbelianGroup; 3]) -> Result<Self, FormulaError> {
        let KHomology { k0, k1 } = k_from_bredon(&h)?;
        let [h0, h1, h2] = h;
        Ok(Homology { h0, h1, h2, k0, k1 })
    }

    fn render(&self, out: &mut String) {
        for (name, g) in [("H0", &self.h0), ("H1", &self.h1), ("H2", &self.h2), ("K0", &self.k0), ("K1", &self.k1)] {
            let _ = writeln!(out, "  {name} = {g}");
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub file: String,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direct: Option<Homology>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Homology>,
    /// Only set when both pipelines ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("file: {}\n", self.file);
        if let Some(h) = &self.direct {
            out.push_str("direct:\n");
            h.render(&mut out);
        }
        if let Some(h) = &self.split {
            out.push_str("split:\n");
            h.render(&mut out);
        }
        match self.agree {
            Some(true) => out.push_str("AGREE\n"),
            Some(false) => out.push_str("DISAGREE\n"),
            None => {}
        }
        out
    }
}

fn load(path: &Path) -> Result<QuotientComplex, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(EXIT_INVALID, format!("{}: {e}\n", path.display())))?;
    qcomplex::parse(&text).map_err(|e| Outcome::fail(EXIT_INVALID, format!("{}: {e}\n", path.display())))
}

pub fn cmd_validate(path: &Path) -> Outcome {
    match load(path) {
        Ok(c) => Outcome {
            code: EXIT_OK,
            stdout: format!(
                "{}: valid ({} vertices, {} edges, {} faces)\n",
                path.display(),
                c.vertices().len(),
                c.edges().len(),
                c.faces().len()
            ),
            stderr: String::new(),
        },
        Err(mut o) => {
            // one violation per line reads better than the joined error
            if let Ok(Err(qcomplex::ComplexError::Validation(vs))) =
                std::fs::read_to_string(path).map(|t| qcomplex::parse(&t))
            {
                o.stderr = format!("{}: invalid\n", path.display());
                for v in vs {
                    let _ = writeln!(o.stderr, "  {v}");
                }
            }
            o
        }
    }
}

pub fn compute_report(path: &Path, mode: Mode) -> Result<Report, Outcome> {
    let c = load(path)?;
    let mut report =
        Report { file: path.display().to_string(), mode, direct: None, split: None, agree: None, warnings: Vec::new() };
    if mode != Mode::Split {
        let h = bredon_homology(&c).map_err(|e| Outcome::fail(EXIT_INTERNAL, format!("direct: {e}\n")))?;
        report.direct = Some(Homology::new(h).map_err(|e| Outcome::fail(EXIT_INTERNAL, format!("direct: {e}\n")))?);
    }
    if mode != Mode::Direct {
        match split_from_complex(&c).and_then(Homology::new) {
            Ok(h) => report.split = Some(h),
            Err(e @ (FormulaError::Torsion(TorsionError::UnknownComponent { .. }) | FormulaError::Disconnected(_))) => {
                report.warnings.push(format!("split mode unavailable: {e}"));
                if report.direct.is_none() {
                    let h = bredon_homology(&c).map_err(|e| Outcome::fail(EXIT_INTERNAL, format!("direct: {e}\n")))?;
                    report.direct =
                        Some(Homology::new(h).map_err(|e| Outcome::fail(EXIT_INTERNAL, format!("direct: {e}\n")))?);
                }
            }
            Err(e) => return Err(Outcome::fail(EXIT_INTERNAL, format!("split: {e}\n"))),
        }
    }
    if let (Mode::Both, Some(d), Some(s)) = (mode, &report.direct, &report.split) {
        report.agree = Some(d == s);
    }
    Ok(report)
}

pub fn cmd_compute(path: &Path, mode: Mode, format: Format) -> Outcome {
    let report = match compute_report(path, mode) {
        Ok(r) => r,
        Err(o) => return o,
    };
    let stdout = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    let stderr = report.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
    let code = if report.agree == Some(false) { EXIT_MISMATCH } else { EXIT_OK };
    Outcome { code, stdout, stderr }
}

pub fn cmd_torsion(path: &Path, ell: Prime, raw: bool) -> Outcome {
    let c = match load(path) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let extracted = extract(&c, ell);
    let mut out = String::new();
    if extracted.is_empty() {
        let _ = writeln!(out, "{ell}-torsion graph is empty");
        return Outcome { code: EXIT_OK, stdout: out, stderr: String::new() };
    }
    let _ = write!(out, "extracted {extracted}");
    let g = if raw {
        extracted
    } else {
        let r = reduce(&extracted);
        let _ = write!(out, "reduced {r}");
        r
    };
    let kinds = classify(&g);
    let mut stderr = String::new();
    out.push_str("components:\n");
    for (t, n) in &kinds {
        let _ = writeln!(out, "  {t} x{n}");
        if *t == ComponentType::Unknown {
            let _ = writeln!(stderr, "warning: {n} component(s) of unknown shape");
        }
    }
    let (h0, h1) = torsion_homology(&g);
    let _ = writeln!(out, "torsion homology: H0 = {h0}, H1 = {h1}");
    if !raw && kinds.iter().all(|(t, _)| *t != ComponentType::Unknown) {
        let list: Vec<ComponentType> = kinds.iter().flat_map(|&(t, n)| std::iter::repeat(t).take(n)).collect();
        let inv = match ell {
            Prime::Two => TorsionInventory::from_components(&list, &[]),
            Prime::Three => TorsionInventory::from_components(&[], &list),
        };
        match inv {
            Ok(i) if ell == Prime::Two => {
                let _ = writeln!(
                    out,
                    "inventory: o2 = {}, iota2 = {}, theta = {}, rho = {}, z2 = {}, d2 = {}",
                    i.o2, i.iota2, i.theta, i.rho, i.z2, i.d2
                );
            }
            Ok(i) => {
                let _ = writeln!(out, "inventory: o3 = {}, iota3 = {}", i.o3, i.iota3);
            }
            Err(e) => return Outcome::fail(EXIT_INTERNAL, format!("{e}\n")),
        }
    }
    Outcome { code: EXIT_OK, stdout: out, stderr }
}

pub fn cmd_table(dataset: Option<&Path>) -> Outcome {
    let rows: Vec<InventoryRow> = match dataset {
        None => dataset::bundled(),
        Some(p) => {
            let parsed = std::fs::read_to_string(p)
                .map_err(|e| e.to_string())
                .and_then(|t| dataset::parse_dataset(&t).map_err(|e| e.to_string()));
            match parsed {
                Ok(r) => r,
                Err(e) => return Outcome::fail(EXIT_INVALID, format!("{}: {e}\n", p.display())),
            }
        }
    };
    let mut out = String::new();
    let mut stderr = String::new();
    let mut matched = 0;
    let mut internal = false;
    for row in &rows {
        match dataset::evaluate_row(row) {
            Ok(r) => {
                let ok = r.matches();
                matched += usize::from(ok);
                if !r.k_consistent() {
                    internal = true;
                    let _ = writeln!(stderr, "{}: K-homology formulas disagree", r.label);
                }
                let _ = writeln!(
                    out,
                    "{:<7} H0 = {} (expected {}) | H1 = {} (expected {}) | K0 = {} | K1 = {} | {}",
                    r.label,
                    r.h0,
                    r.expected_h0,
                    r.h1,
                    r.expected_h1,
                    r.k.k0,
                    r.k.k1,
                    if ok { "ok" } else { "MISMATCH" }
                );
                if !ok {
                    let _ = writeln!(stderr, "mismatch: {}", r.label);
                }
            }
            Err(e) => {
                let _ = writeln!(out, "{:<7} error: {e} | MISMATCH", row.label);
                let _ = writeln!(stderr, "mismatch: {}: {e}", row.label);
            }
        }
    }
    let _ = writeln!(out, "{matched}/{} match", rows.len());
    let code = if internal {
        EXIT_INTERNAL
    } else if matched == rows.len() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    Outcome { code, stdout: out, stderr }
}
