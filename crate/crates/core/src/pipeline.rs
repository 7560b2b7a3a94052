//! End-to-end runs: base, validation, construction, certificate and QE table.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::base::{lps_graph, random_high_girth, validate_base, BaseReport, LpsParams};
use crate::certificate::{build_certificate, CertOptions, Certificate};
use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::io::{load_graph, save_graph};
use crate::qe::{indicator_test_function, min_support_for_mass, qe_average, scarring_witness};
use crate::scar::{multi_glue, ScarredGraph};
use crate::spectral::{full_eigensystem, DENSE_LIMIT};
use crate::families;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomBase {
    pub n: usize,
    pub degree: usize,
    pub min_girth: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum BaseSource {
    Lps { p: u64, q: u64 },
    File(PathBuf),
    Family(String),
    Random(RandomBase),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Checked against the base degree minus one when given.
    pub d: Option<usize>,
    /// Exactly one of `r` and `alpha`; `alpha` gives `r = floor(alpha log_d m)`.
    pub r: Option<usize>,
    pub alpha: Option<f64>,
    pub sites: usize,
    pub lps: Option<(u64, u64)>,
    pub base_file: Option<PathBuf>,
    pub family: Option<String>,
    pub random: Option<RandomBase>,
    pub seed: u64,
    pub spectral_seed: u64,
    pub tol: f64,
    pub out_graph: Option<PathBuf>,
    pub out_cert: Option<PathBuf>,
    pub out_qe: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            d: None,
            r: Some(1),
            alpha: None,
            sites: 1,
            lps: None,
            base_file: None,
            family: None,
            random: None,
            seed: 1,
            spectral_seed: 0x5eed,
            tol: 1e-8,
            out_graph: None,
            out_cert: None,
            out_qe: None,
        }
    }
}

impl RunConfig {
    pub fn base_source(&self) -> Result<BaseSource> {
        let mut found = Vec::new();
        if let Some((p, q)) = self.lps {
            found.push(BaseSource::Lps { p, q });
        }
        if let Some(f) = &self.base_file {
            found.push(BaseSource::File(f.clone()));
        }
        if let Some(name) = &self.family {
            found.push(BaseSource::Family(name.clone()));
        }
        if let Some(r) = self.random {
            found.push(BaseSource::Random(r));
        }
        match found.len() {
            1 => Ok(found.pop().expect("one source")),
            0 => Err(Error::InvalidArgument("no base graph source given".into())),
            _ => Err(Error::InvalidArgument("more than one base graph source given".into())),
        }
    }

    /// Resolves `r` for a base with branching `d` and `m` vertices.
    pub fn radius(&self, d: usize, m: usize) -> Result<usize> {
        let r = match (self.r, self.alpha) {
            (Some(r), None) => r,
            (None, Some(a)) if a > 0.0 && d >= 2 => (a * (m as f64).ln() / (d as f64).ln()).floor() as usize,
            (None, Some(a)) => return Err(Error::InvalidArgument(format!("alpha {a} needs alpha > 0 and d >= 2"))),
            _ => return Err(Error::InvalidArgument("give exactly one of r and alpha".into())),
        };
        if r < 1 {
            return Err(Error::InvalidArgument("r must be at least 1".into()));
        }
        Ok(r)
    }

    pub fn validate(&self) -> Result<BaseSource> {
        let src = self.base_source()?;
        if self.r.is_some() == self.alpha.is_some() {
            return Err(Error::InvalidArgument("give exactly one of r and alpha".into()));
        }
        if self.r == Some(0) {
            return Err(Error::InvalidArgument("r must be at least 1".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidArgument("tolerance must be non-negative".into()));
        }
        Ok(src)
    }
}

pub fn load_base(src: &BaseSource, seed: u64) -> Result<Graph> {
    match src {
        BaseSource::Lps { p, q } => lps_graph(&LpsParams::new(*p, *q)?),
        BaseSource::File(path) => load_graph(path),
        BaseSource::Family(name) => {
            families::by_name(name).ok_or_else(|| Error::InvalidArgument(format!("unknown graph family {name:?}")))
        }
        BaseSource::Random(rb) => random_high_girth(rb.n, rb.degree, rb.min_girth, seed),
    }
}

/// One row per eigenvector of a full eigenbasis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QeRow {
    pub lambda: f64,
    pub min_support_half: usize,
    pub witness: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QeTable {
    pub set: Vec<usize>,
    pub rows: Vec<QeRow>,
    /// QE average of the indicator test function of `set`.
    pub average: f64,
}

impl QeTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,min_support_0.5,witness\n");
        for row in &self.rows {
            let _ = writeln!(out, "{},{},{}", row.lambda, row.min_support_half, row.witness);
        }
        out
    }
}

/// Witnesses and half-mass supports for every eigenvector, with `set` as the
/// localization set. Needs a full eigenbasis, so at most [`DENSE_LIMIT`]
/// vertices.
pub fn qe_table(g: &Graph, set: &[usize]) -> Result<QeTable> {
    let n = g.n();
    if n > DENSE_LIMIT {
        return Err(Error::Precondition(format!(
            "QE statistics need a full eigenbasis; {n} vertices exceed {DENSE_LIMIT}"
        )));
    }
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    let sys = full_eigensystem(g)?;
    let rows = sys
        .values
        .iter()
        .zip(&sys.vectors)
        .map(|(&lambda, v)| {
            Ok(QeRow {
                lambda,
                min_support_half: min_support_for_mass(v, 0.5)?.size,
                witness: scarring_witness(v, &set, n)?.value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let a = indicator_test_function(&set, n)?;
    let average = qe_average(&sys.vectors, &a)?;
    Ok(QeTable { set, rows, average })
}

/// Union of the certified localized supports.
pub fn certified_set(cert: &Certificate) -> Vec<usize> {
    let mut s: Vec<usize> = cert.localized.iter().flat_map(|l| l.support.iter().copied()).collect();
    s.sort_unstable();
    s.dedup();
    s
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub base_report: BaseReport,
    pub scarred: ScarredGraph,
    pub certificate: Certificate,
    pub qe: Option<QeTable>,
}

impl PipelineOutput {
    pub fn passed(&self) -> bool {
        self.certificate.passed
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

pub fn run_pipeline(cfg: &RunConfig) -> Result<PipelineOutput> {
    let src = cfg.validate().map_err(|e| e.in_stage("config"))?;
    let h = load_base(&src, cfg.seed).map_err(|e| e.in_stage("base"))?;
    let d = graph::regular_degree(&h)
        .filter(|&k| k >= 3)
        .map(|k| k - 1)
        .ok_or_else(|| Error::Precondition("base graph must be (d+1)-regular with d >= 2".into()).in_stage("validate"))?;
    if let Some(want) = cfg.d {
        if want != d {
            return Err(Error::InvalidArgument(format!("--d {want} but the base graph has d = {d}")).in_stage("validate"));
        }
    }
    let r = cfg.radius(d, h.n()).map_err(|e| e.in_stage("config"))?;
    let report = validate_base(&h, d, r, cfg.tol);
    if !(report.regular_ok && report.connected && !report.bipartite && report.girth_ok && report.tree_ball_ok) {
        return Err(Error::Precondition(format!(
            "base graph unsuitable for r = {r}: regular {}, connected {}, bipartite {}, girth {} (needs > {} and >= {})",
            report.regular_ok,
            report.connected,
            report.bipartite,
            report.girth,
            4 * r,
            2 * r + 4
        ))
        .in_stage("validate"));
    }
    let sg = multi_glue(&h, cfg.sites, r, cfg.seed).map_err(|e| e.in_stage("construct"))?;
    let certificate = build_certificate(
        &sg,
        &CertOptions {
            spectral_seed: cfg.spectral_seed,
            base_ramanujan: Some(report.ramanujan_ok),
            ..CertOptions::default()
        },
    );
    let qe = if sg.graph.n() <= DENSE_LIMIT {
        Some(qe_table(&sg.graph, &certified_set(&certificate)).map_err(|e| e.in_stage("qe"))?)
    } else {
        None
    };
    if let Some(p) = &cfg.out_graph {
        save_graph(&sg.graph, p).map_err(|e| e.in_stage("output"))?;
    }
    if let Some(p) = &cfg.out_cert {
        write_text(p, &certificate.to_json()?).map_err(|e| e.in_stage("output"))?;
    }
    if let (Some(p), Some(t)) = (&cfg.out_qe, &qe) {
        write_text(p, &t.to_csv()).map_err(|e| e.in_stage("output"))?;
    }
    Ok(PipelineOutput {
        base_report: report,
        scarred: sg,
        certificate,
        qe,
    })
}
