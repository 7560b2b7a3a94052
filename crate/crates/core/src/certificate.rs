//! Certificates: every claim about a constructed graph, in a form that can be
//! re-checked from the graph alone.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{self, Girth, Graph};
use crate::qe::{localization_bounds, min_support_for_mass, scarring_witness};
use crate::scar::{all_localized, construction_girth_bound, ScarredGraph};
use crate::spectral::{self, residual, Method, SpectralOptions, DENSE_LIMIT};
use crate::tree::{interior_size, radial_spectrum};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const RESIDUAL_TOL: f64 = 1e-10;
pub const WITNESS_TOL: f64 = 1e-12;
/// Allowed drift of the recomputed nontrivial spectral radius.
pub const SPECTRAL_TOL: f64 = 1e-7;
pub const LOCALIZATION_EPS: [f64; 4] = [0.1, 0.3, 0.5, 0.9];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalizedRecord {
    pub site: usize,
    pub lambda: f64,
    pub support_size: usize,
    pub residual: f64,
    /// `V1 u V2` of the site, sorted; `values[i]` sits on `support[i]`.
    pub support: Vec<usize>,
    pub values: Vec<f64>,
}

impl LocalizedRecord {
    pub fn dense(&self, n: usize) -> Option<Vec<f64>> {
        let mut v = vec![0.0; n];
        for (&x, &val) in self.support.iter().zip(&self.values) {
            *v.get_mut(x)? = val;
        }
        Some(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScarRecord {
    pub site: usize,
    pub lambda: f64,
    pub support_size: usize,
    pub value: f64,
    /// `1 - |S| / M`.
    pub expected: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub construction: u64,
    pub attempts: u64,
    pub spectral: u64,
}

/// Smallest mass-`eps` support over a full eigenbasis against the explicit
/// localization lower bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalizationScan {
    pub eps: Vec<f64>,
    pub min_support: Vec<usize>,
    pub bound: Vec<f64>,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    /// Unasserted checks are reported but do not affect `passed`.
    pub asserted: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub tool_version: String,
    /// Seconds since the Unix epoch; ignored by determinism comparisons.
    pub timestamp: u64,
    pub d: usize,
    pub r: usize,
    pub k: usize,
    pub m: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub regular: bool,
    pub girth: Girth,
    pub girth_bound: usize,
    pub lambda_top: f64,
    pub lambda_max_nontrivial: f64,
    pub spectral_method: Method,
    pub spectral_residual: f64,
    pub spectral_threshold: f64,
    /// Whether the base graph was measured Ramanujan; the threshold is only
    /// asserted then.
    pub base_ramanujan: Option<bool>,
    /// `r log d / log m`.
    pub alpha: f64,
    pub localized: Vec<LocalizedRecord>,
    pub scarring: Vec<ScarRecord>,
    pub localization: Option<LocalizationScan>,
    pub seeds: Seeds,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// JSON with the timestamp zeroed, for byte-level determinism checks.
    pub fn canonical_json(&self) -> Result<String> {
        let mut c = self.clone();
        c.timestamp = 0;
        c.to_json()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct CertOptions {
    pub spectral_seed: u64,
    pub tol: f64,
    pub base_ramanujan: Option<bool>,
    /// Scan a full eigenbasis for the localization bound (only up to
    /// [`DENSE_LIMIT`] vertices).
    pub localization_scan: bool,
}

impl Default for CertOptions {
    fn default() -> Self {
        Self {
            spectral_seed: 0x5eed,
            tol: 1e-10,
            base_ramanujan: None,
            localization_scan: true,
        }
    }
}

fn spectral_opts(seed: u64, tol: f64) -> SpectralOptions {
    SpectralOptions {
        seed,
        tol,
        ..SpectralOptions::default()
    }
}

fn check(name: &str, ok: bool, asserted: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        ok,
        asserted,
        detail,
    }
}

fn scan_localization(g: &Graph, d: usize, girth: Girth) -> Result<LocalizationScan> {
    let sys = spectral::full_eigensystem(g)?;
    let girth = girth.finite().unwrap_or(g.n());
    let eps = LOCALIZATION_EPS.to_vec();
    let bound: Vec<f64> = eps.iter().map(|&e| localization_bounds(d, girth, e).gs_bound).collect();
    let mut min_support = vec![usize::MAX; eps.len()];
    let mut violations = 0;
    for v in &sys.vectors {
        for (j, &e) in eps.iter().enumerate() {
            let size = min_support_for_mass(v, e)?.size;
            min_support[j] = min_support[j].min(size);
            if (size as f64) < bound[j] {
                violations += 1;
            }
        }
    }
    Ok(LocalizationScan {
        eps,
        min_support,
        bound,
        violations,
    })
}

/// Measures everything claimed about `sg`. Failures are recorded in
/// `checks`, never returned as errors.
pub fn build_certificate(sg: &ScarredGraph, opts: &CertOptions) -> Certificate {
    let g = &sg.graph;
    let (d, r, k, m) = (sg.d, sg.r, sg.sites.len(), sg.base_size);
    let n = g.n();
    let mut checks = Vec::new();

    let expected_n = m + 2 * k * interior_size(d, r);
    checks.push(check(
        "vertex_count",
        n == expected_n,
        true,
        format!("M = {n}, m + 2k interior = {expected_n}"),
    ));
    let regular = graph::regular_degree(g) == Some(d + 1);
    checks.push(check("regular", regular, true, format!("degree {:?}", graph::regular_degree(g))));

    let girth = graph::girth(g);
    let girth_bound = if k == 0 { 0 } else { construction_girth_bound(d, r) };
    checks.push(check(
        "girth",
        girth >= Girth::Finite(girth_bound),
        true,
        format!("girth {girth}, bound {girth_bound}"),
    ));

    let thresholds = spectral::spectral_threshold(d.max(1)).ok();
    let spectral_threshold = thresholds.map_or(f64::NAN, |t| t.theorem);
    let (lambda_top, lambda2, method, spec_res) =
        match spectral::spectral_summary(g, &spectral_opts(opts.spectral_seed, opts.tol)) {
            Ok(s) => (s.lambda_top, s.lambda2_abs, s.method, s.residual_bound),
            Err(e) => {
                checks.push(check("spectrum_computed", false, true, e.to_string()));
                (f64::NAN, f64::NAN, Method::Iterative, f64::NAN)
            }
        };
    let assert_threshold = opts.base_ramanujan == Some(true);
    checks.push(check(
        "spectral_threshold",
        lambda2 <= spectral_threshold,
        assert_threshold,
        format!("max nontrivial |lambda| {lambda2}, threshold {spectral_threshold}"),
    ));

    let mut localized = Vec::new();
    let mut scarring = Vec::new();
    match all_localized(sg) {
        Ok(pairs) => {
            let bulk = 2.0 * (d as f64).sqrt();
            let mut worst_res: f64 = 0.0;
            let mut worst_witness: f64 = 0.0;
            let mut inside = true;
            for p in pairs {
                let support = sg.sites[p.site].support();
                let res = residual(g, &p.vector, p.lambda).map_or(f64::INFINITY, |r| r.max);
                worst_res = worst_res.max(res);
                inside &= p.lambda.abs() < bulk;
                let expected = 1.0 - support.len() as f64 / n as f64;
                let value = scarring_witness(&p.vector, &support, n).map_or(f64::NAN, |w| w.value);
                worst_witness = worst_witness.max((value - expected).abs());
                scarring.push(ScarRecord {
                    site: p.site,
                    lambda: p.lambda,
                    support_size: support.len(),
                    value,
                    expected,
                });
                localized.push(LocalizedRecord {
                    site: p.site,
                    lambda: p.lambda,
                    support_size: support.len(),
                    residual: res,
                    values: support.iter().map(|&x| p.vector[x]).collect(),
                    support,
                });
            }
            checks.push(check(
                "localized_count",
                localized.len() == k * r,
                true,
                format!("{} localized pairs, expected k r = {}", localized.len(), k * r),
            ));
            checks.push(check(
                "localized_residual",
                worst_res <= RESIDUAL_TOL,
                true,
                format!("worst residual {worst_res:e}"),
            ));
            checks.push(check("localized_inside_bulk", inside, true, format!("all |lambda| < {bulk}")));
            checks.push(check(
                "scarring_witness",
                worst_witness <= WITNESS_TOL,
                true,
                format!("worst deviation from 1 - |S|/M: {worst_witness:e}"),
            ));
        }
        Err(e) => checks.push(check("localized_count", false, true, e.to_string())),
    }
    let disjoint = supports_disjoint(&localized);
    checks.push(check("disjoint_supports", disjoint, true, "supports of distinct sites".into()));

    let localization = if opts.localization_scan && n <= DENSE_LIMIT {
        match scan_localization(g, d, girth) {
            Ok(scan) => {
                checks.push(check(
                    "localization_bound",
                    scan.violations == 0,
                    true,
                    format!("{} violations over {} eigenvectors", scan.violations, n),
                ));
                Some(scan)
            }
            Err(e) => {
                checks.push(check("localization_bound", false, true, e.to_string()));
                None
            }
        }
    } else {
        None
    };

    let passed = checks.iter().all(|c| c.ok || !c.asserted);
    Certificate {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.into(),
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |t| t.as_secs()),
        d,
        r,
        k,
        m,
        vertex_count: n,
        edge_count: g.edge_count(),
        regular,
        girth,
        girth_bound,
        lambda_top,
        lambda_max_nontrivial: lambda2,
        spectral_method: method,
        spectral_residual: spec_res,
        spectral_threshold,
        base_ramanujan: opts.base_ramanujan,
        alpha: effective_alpha(d, r, m),
        localized,
        scarring,
        localization,
        seeds: Seeds {
            construction: sg.seed,
            attempts: sg.attempts,
            spectral: opts.spectral_seed,
        },
        checks,
        passed,
    }
}

pub fn effective_alpha(d: usize, r: usize, m: usize) -> f64 {
    if d < 2 || m < 2 {
        return f64::NAN;
    }
    r as f64 * (d as f64).ln() / (m as f64).ln()
}

fn supports_disjoint(localized: &[LocalizedRecord]) -> bool {
    let mut owner = std::collections::HashMap::new();
    localized.iter().all(|rec| {
        rec.support
            .iter()
            .all(|&x| *owner.entry(x).or_insert(rec.site) == rec.site)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub field: String,
    pub certified: String,
    pub measured: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn fails_on(&self, field: &str) -> bool {
        self.mismatches.iter().any(|m| m.field == field)
    }
}

/// Recomputes each certified quantity from `g` and itemizes disagreements.
pub fn verify_certificate(g: &Graph, cert: &Certificate) -> VerifyReport {
    let mut mm = Vec::new();
    let mut diff = |field: &str, certified: String, measured: String| {
        mm.push(Mismatch {
            field: field.into(),
            certified,
            measured,
        })
    };
    if cert.schema_version != SCHEMA_VERSION {
        diff("schema_version", cert.schema_version.to_string(), SCHEMA_VERSION.to_string());
    }
    let n = g.n();
    if n != cert.vertex_count {
        diff("vertex_count", cert.vertex_count.to_string(), n.to_string());
    }
    let expected_n = cert.m + 2 * cert.k * interior_size(cert.d, cert.r);
    if cert.vertex_count != expected_n {
        diff("vertex_count", cert.vertex_count.to_string(), format!("m + 2k interior = {expected_n}"));
    }
    if g.edge_count() != cert.edge_count {
        diff("edge_count", cert.edge_count.to_string(), g.edge_count().to_string());
    }
    let regular = graph::regular_degree(g) == Some(cert.d + 1);
    if regular != cert.regular {
        diff("regular", cert.regular.to_string(), regular.to_string());
    }
    let girth = graph::girth(g);
    if girth != cert.girth {
        diff("girth", cert.girth.to_string(), girth.to_string());
    }
    let bound = if cert.k == 0 { 0 } else { construction_girth_bound(cert.d, cert.r) };
    if bound != cert.girth_bound {
        diff("girth_bound", cert.girth_bound.to_string(), bound.to_string());
    }
    let threshold = spectral::spectral_threshold(cert.d.max(1)).map_or(f64::NAN, |t| t.theorem);
    if (threshold - cert.spectral_threshold).abs() > 1e-12 {
        diff("spectral_threshold", cert.spectral_threshold.to_string(), threshold.to_string());
    }
    match spectral::spectral_summary(g, &spectral_opts(cert.seeds.spectral, 1e-10)) {
        Ok(s) => {
            if (s.lambda2_abs - cert.lambda_max_nontrivial).abs() > SPECTRAL_TOL {
                diff(
                    "lambda_max_nontrivial",
                    cert.lambda_max_nontrivial.to_string(),
                    s.lambda2_abs.to_string(),
                );
            }
            if (s.lambda_top - cert.lambda_top).abs() > SPECTRAL_TOL {
                diff("lambda_top", cert.lambda_top.to_string(), s.lambda_top.to_string());
            }
        }
        Err(e) => diff("lambda_max_nontrivial", cert.lambda_max_nontrivial.to_string(), e.to_string()),
    }

    if cert.localized.len() != cert.k * cert.r {
        diff("localized", format!("{} pairs", cert.localized.len()), format!("k r = {}", cert.k * cert.r));
    }
    let radial = if cert.r >= 1 { radial_spectrum(cert.d, cert.r - 1).ok() } else { None };
    for (i, rec) in cert.localized.iter().enumerate() {
        let field = format!("localized[{i}]");
        if rec.support.len() != rec.values.len() || rec.support_size != rec.support.len() {
            diff(&field, format!("support size {}", rec.support_size), format!("{} entries", rec.support.len()));
            continue;
        }
        if radial.as_ref().and_then(|s| s.find(rec.lambda, 1e-9)).is_none() {
            diff(&field, format!("lambda {}", rec.lambda), "not a radial eigenvalue".into());
        }
        let Some(v) = rec.dense(n) else {
            diff(&field, "support in range".into(), format!("vertex beyond {n}"));
            continue;
        };
        let unit = v.iter().map(|x| x * x).sum::<f64>();
        let res = residual(g, &v, rec.lambda).map_or(f64::INFINITY, |r| r.max);
        if res > RESIDUAL_TOL || (unit - 1.0).abs() > 1e-9 {
            diff(&field, format!("residual {:e}", rec.residual), format!("residual {res:e}, norm^2 {unit}"));
        }
        let value = scarring_witness(&v, &rec.support, n).map_or(f64::NAN, |w| w.value);
        match cert.scarring.get(i) {
            Some(s) if (s.value - value).abs() <= WITNESS_TOL && s.support_size == rec.support_size => {}
            Some(s) => diff(&format!("scarring[{i}]"), s.value.to_string(), value.to_string()),
            None => diff(&format!("scarring[{i}]"), "missing".into(), value.to_string()),
        }
    }
    if !supports_disjoint(&cert.localized) {
        diff("disjoint_supports", "true".into(), "false".into());
    }
    if let Some(scan) = &cert.localization {
        match scan_localization(g, cert.d, girth) {
            Ok(s) if s.violations == scan.violations => {}
            Ok(s) => diff("localization", scan.violations.to_string(), s.violations.to_string()),
            Err(e) => diff("localization", scan.violations.to_string(), e.to_string()),
        }
    }
    let passed = cert.checks.iter().all(|c| c.ok || !c.asserted);
    if passed != cert.passed {
        diff("passed", cert.passed.to_string(), passed.to_string());
    }
    VerifyReport {
        ok: mm.is_empty(),
        mismatches: mm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::scar::{carve_site, glue};

    fn mcgee_cert() -> (ScarredGraph, Certificate) {
        let h = families::mcgee();
        let sg = glue(&h, &[carve_site(&h, 0, 1).unwrap()], 3).unwrap();
        let cert = build_certificate(&sg, &CertOptions::default());
        (sg, cert)
    }

    #[test]
    fn mcgee_round_trip() {
        let (sg, cert) = mcgee_cert();
        assert_eq!(cert.vertex_count, 26);
        assert_eq!(cert.localized.len(), 1);
        assert_eq!(cert.localized[0].lambda, 0.0);
        assert!(cert.passed, "{:#?}", cert.checks);
        let back = Certificate::from_json(&cert.to_json().unwrap()).unwrap();
        assert_eq!(back, cert);
        let report = verify_certificate(&sg.graph, &back);
        assert!(report.ok, "{:#?}", report.mismatches);
    }

    #[test]
    fn tampering_detected() {
        let (sg, cert) = mcgee_cert();
        let mut bad = cert.clone();
        bad.girth = Girth::Finite(bad.girth.finite().unwrap() + 2);
        assert!(verify_certificate(&sg.graph, &bad).fails_on("girth"));
        let report = verify_certificate(&families::mcgee(), &cert);
        assert!(report.fails_on("vertex_count"));
        let mut bad = cert.clone();
        bad.localized[0].values[0] *= 1.5;
        assert!(verify_certificate(&sg.graph, &bad).fails_on("localized[0]"));
    }

    #[test]
    fn deterministic_modulo_timestamp() {
        let (_, a) = mcgee_cert();
        let (_, mut b) = mcgee_cert();
        b.timestamp += 17;
        assert_eq!(a.canonical_json().unwrap(), b.canonical_json().unwrap());
    }
}
