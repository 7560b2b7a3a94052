//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the verdicts are printed even when
//! everything passes. Exits nonzero if any criterion fails.

mod instances;
mod oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use scargraph::certificate::{build_certificate, verify_certificate, CertOptions, Certificate};
use scargraph::graph::Girth;
use scargraph::pairing::{
    glue_double_tree, pair_trees, pairing_girth_bound, path_count_cumulative, path_count_exact, path_count_total,
};
use scargraph::pipeline::{load_base, run_pipeline, RandomBase, RunConfig};
use scargraph::qe::{localization_bounds, min_support_for_mass, scarring_witness};
use scargraph::scar::{all_localized, construction_girth_bound, greedy_packing, multi_glue, packing_bound};
use scargraph::spectral::{
    kahale_check, kahale_sequence, second_eigenpair, spectral_summary, spectral_threshold, KahaleInstance, Method,
    SpectralOptions,
};
use scargraph::tree::{interior_size, lift_radial, radial_spectrum, DaryTree};
use scargraph::{base, families, Graph};

use instances::Instance;
use oracle::Adj;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn girth_of(adj: &Adj) -> Girth {
    oracle::girth(adj).map_or(Girth::Infinite, Girth::Finite)
}

/// Criterion 1: paired trees reach `2 floor(log_{2d-1}(n-1)) + 2`.
fn pairing_girth() -> Outcome {
    let start = Instant::now();
    let mut worst_margin = i64::MAX;
    for d in 2..=4 {
        for depth in 1..=6 {
            let p = pair_trees(d, depth, 1).map_err(|e| format!("pair_trees({d},{depth}): {e}"))?;
            let n = (d + 1) * d.pow(depth as u32 - 1);
            let bound = 2 * ((((n - 1) as f64).ln() / ((2 * d - 1) as f64).ln()) + 1e-12).floor() as usize + 2;
            ensure!(bound == pairing_girth_bound(d, n), "bound mismatch at d={d} D={depth}");
            let (adj, _) = oracle::double_tree(d, depth, &p.pi);
            let g = girth_of(&adj);
            ensure!(g == p.achieved_girth, "d={d} D={depth}: reported girth {} but BFS finds {g}", p.achieved_girth);
            ensure!(
                oracle::girth(&oracle::adjacency(&glue_double_tree(&DaryTree::new(d, depth).unwrap(), &p.pi).unwrap()))
                    .map_or(Girth::Infinite, Girth::Finite)
                    == g,
                "d={d} D={depth}: library gluing disagrees with the reference gluing"
            );
            ensure!(g >= Girth::Finite(bound), "d={d} D={depth}: girth {g} below bound {bound}");
            worst_margin = worst_margin.min(g.finite().map_or(i64::MAX, |g| g as i64 - bound as i64));
        }
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(30), "took {took:?}");
    Ok(format!("18 (d, D) pairs, smallest margin over bound {worst_margin}, {took:.1?}"))
}

/// Criterion 2: brute-force path counts in glued double trees.
fn path_counts() -> Outcome {
    let mut checked = 0;
    let mut notes = Vec::new();
    for (d, max_depth) in [(2, 6), (3, 4), (4, 3)] {
        for depth in 1..=max_depth {
            for (label, pi) in [
                ("paired", pair_trees(d, depth, 2).unwrap().pi),
                ("identity", (0..(d + 1) * d.pow(depth as u32 - 1)).collect()),
            ] {
                let (adj, leaves) = oracle::double_tree(d, depth, &pi);
                ensure!(adj.len() <= 500, "instance too large");
                let girth = oracle::girth(&adj).unwrap_or(usize::MAX);
                let mut marked = vec![false; adj.len()];
                for &l in &leaves {
                    marked[l] = true;
                }
                let mut within = 1u128;
                for s in 1..=depth {
                    if 2 * s >= girth {
                        break;
                    }
                    let mut excess = 0i128;
                    let mut total_all = 0u128;
                    for &x in &leaves {
                        let counts = oracle::alternating_paths(&adj, &marked, x, s);
                        let total: u128 = counts.iter().sum();
                        total_all += total;
                        for r in 1..=s {
                            let formula = 2
                                * oracle::binomial(s as u128 - 1, r as u128 - 1)
                                * ((d - 1) as u128).pow(r as u32)
                                * (d as u128).pow((s - r) as u32);
                            ensure!(formula == path_count_exact(d, r, s).unwrap(), "library m({r},{s}) differs at d={d}");
                            if s < depth {
                                ensure!(
                                    counts[r] == formula,
                                    "d={d} D={depth} {label} leaf {x}: m({r},{s}) counted {} expected {formula}",
                                    counts[r]
                                );
                            } else {
                                excess += counts[r] as i128 - formula as i128;
                            }
                        }
                        if s < depth {
                            let m_s = 2 * (d as u128 - 1) * (2 * d as u128 - 1).pow(s as u32 - 1);
                            ensure!(total == m_s && m_s == path_count_total(d, s).unwrap(), "m({s}) mismatch");
                        }
                    }
                    if s < depth {
                        within += total_all / leaves.len() as u128;
                        ensure!(
                            within == (2 * d as u128 - 1).pow(s as u32) && within == path_count_cumulative(d, s).unwrap(),
                            "cumulative count {within} at d={d} k={s}"
                        );
                        checked += 1;
                    } else if excess != 0 && label == "paired" {
                        notes.push(format!("d={d} D={depth} s={s}: +{excess} root-turn paths over the formula"));
                    }
                }
            }
        }
    }
    for n in &notes {
        println!("      note: {n} (s >= D, not asserted)");
    }
    Ok(format!("{checked} (instance, s) cases with s < D and girth > 2s match exactly"))
}

/// Criterion 3: radial spectra of d-ary trees.
fn radial_spectra() -> Outcome {
    let mut dense_checked = 0;
    for d in 2..=5usize {
        let bulk = 2.0 * (d as f64).sqrt();
        for depth in 0..=8usize {
            let spec = radial_spectrum(d, depth).map_err(|e| e.to_string())?;
            ensure!(spec.eigenvalues.len() == depth + 1, "d={d} D={depth}: {} eigenvalues", spec.eigenvalues.len());
            ensure!(spec.eigenvalues.windows(2).all(|w| w[1] - w[0] > 1e-9), "d={d} D={depth}: repeated eigenvalue");
            ensure!(spec.eigenvalues.iter().all(|l| l.abs() < bulk), "d={d} D={depth}: eigenvalue outside bulk");
            let tree = DaryTree::new(d, depth).unwrap();
            let reference = oracle::dary_tree(d, depth);
            for (lambda, profile) in spec.eigenvalues.iter().zip(&spec.profiles) {
                let v = lift_radial(&tree, profile).unwrap();
                let res = oracle::max_residual(&reference.adj, &v, *lambda);
                ensure!(res <= 1e-10, "d={d} D={depth} lambda={lambda}: residual {res:e}");
                ensure!((oracle::dot(&v, &v) - 1.0).abs() < 1e-9, "lifted vector not unit");
            }
            if reference.adj.len() <= 400 {
                let (values, _) = oracle::dense_eigen(&reference.adj);
                for lambda in &spec.eigenvalues {
                    ensure!(
                        values.iter().any(|x| (x - lambda).abs() <= 1e-9),
                        "d={d} D={depth}: {lambda} not in the dense spectrum"
                    );
                }
                dense_checked += 1;
            }
        }
    }
    Ok(format!("36 (d, D) pairs, {dense_checked} cross-checked against dense spectra"))
}

fn localized_ok(inst: &Instance, adj: &Adj) -> Result<usize, String> {
    let sg = &inst.sg;
    let pairs = all_localized(sg).map_err(|e| e.to_string())?;
    ensure!(pairs.len() == sg.sites.len() * sg.r, "{}: {} localized pairs", inst.name, pairs.len());
    for p in &pairs {
        let site = &sg.sites[p.site];
        let support = site.support();
        ensure!(support.len() == 2 * interior_size(sg.d, sg.r), "{}: support size", inst.name);
        let outside = (0..p.vector.len()).filter(|x| p.vector[*x] != 0.0 && support.binary_search(x).is_err()).count();
        ensure!(outside == 0, "{}: {outside} nonzero entries outside V1 u V2", inst.name);
        let res = oracle::max_residual(adj, &p.vector, p.lambda);
        ensure!(res <= 1e-10, "{}: residual {res:e} at lambda {}", inst.name, p.lambda);
        ensure!((oracle::dot(&p.vector, &p.vector) - 1.0).abs() < 1e-12, "{}: not unit", inst.name);
    }
    Ok(pairs.len())
}

/// Criterion 4: end-to-end construction on McGee and `X^{5,29}`.
fn end_to_end() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (inst, assert_threshold) in [(instances::mcgee(), false), (instances::lps(), true), (instances::cubic(), false)] {
        let sg = &inst.sg;
        let (d, r) = (sg.d, sg.r);
        let adj = oracle::adjacency(&sg.graph);
        ensure!(oracle::is_regular(&adj, d + 1), "{}: not {}-regular", inst.name, d + 1);
        let expected = inst.base.n() + 2 * sg.sites.len() * interior_size(d, r);
        ensure!(sg.graph.n() == expected, "{}: {} vertices, expected {expected}", inst.name, sg.graph.n());
        let girth = girth_of(&adj);
        let n_leaves = (d + 1) * d.pow(r as u32 - 1);
        let bound = pairing_girth_bound(d, n_leaves);
        ensure!(bound == construction_girth_bound(d, r), "bound bookkeeping");
        ensure!(girth == sg.girth && girth >= Girth::Finite(bound), "{}: girth {girth} vs bound {bound}", inst.name);
        let count = localized_ok(inst, &adj)?;
        let summary = spectral_summary(&sg.graph, &SpectralOptions::default()).map_err(|e| e.to_string())?;
        let threshold = 3.0 / 2f64.sqrt() * (d as f64).sqrt();
        ensure!(
            (spectral_threshold(d).unwrap().theorem - threshold).abs() < 1e-12,
            "threshold bookkeeping"
        );
        if sg.graph.n() <= 400 {
            let (values, _) = oracle::dense_eigen(&adj);
            let top = values.last().copied().unwrap();
            let nontrivial = values[..values.len() - 1].iter().map(|x| x.abs()).fold(0.0, f64::max);
            ensure!((top - (d + 1) as f64).abs() < 1e-9, "top eigenvalue");
            ensure!((nontrivial - summary.lambda2_abs).abs() < 1e-9, "{}: spectral radius mismatch", inst.name);
        }
        if assert_threshold {
            let base_l2 = spectral_summary(&inst.base, &SpectralOptions::default()).unwrap().lambda2_abs;
            ensure!(base_l2 <= 2.0 * (d as f64).sqrt() + 1e-9, "{}: base not Ramanujan ({base_l2})", inst.name);
            ensure!(
                summary.lambda2_abs <= threshold,
                "{}: nontrivial radius {} exceeds {threshold}",
                inst.name,
                summary.lambda2_abs
            );
        }
        println!(
            "      {}: M = {}, girth {girth} (bound {bound}), {count} localized, radius {:.6} vs {threshold:.6}{}",
            inst.name,
            sg.graph.n(),
            summary.lambda2_abs,
            if assert_threshold { "" } else { " (reported only)" }
        );
        parts.push(inst.name);
    }
    // the proof's vertex count treats the glued trees as full trees
    let (d, r) = (5usize, 1usize);
    let proof_n = (d.pow(r as u32 + 1) + d.pow(r as u32) - 2) / (d - 1);
    println!(
        "      note: per tree the construction adds {} vertices; the proof's n = {proof_n} also counts the {} leaves",
        interior_size(d, r),
        proof_n - interior_size(d, r)
    );
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(300), "took {took:?}");
    Ok(format!("{} in {took:.1?}", parts.join(", ")))
}

/// Criterion 5: threshold identities, the x-sequence, and `As <= mu s`.
fn threshold_identities() -> Outcome {
    let d2 = kahale_sequence(2, 0.1, 1, 4).unwrap();
    ensure!((d2.b - 5.0 / 6f64.sqrt()).abs() < 1e-15, "b(2) = {}", d2.b);
    ensure!(format!("{:.5}", d2.b) == "2.04124", "b(2) rounds to {:.5}", d2.b);
    for d in 2..=6usize {
        let df = d as f64;
        let b = (3.0 * df - 1.0) / (df * (2.0 * df - 1.0)).sqrt();
        let c = ((2.0 * df - 1.0) / df).sqrt();
        ensure!((c + 1.0 / c - b).abs() < 1e-12, "c + 1/c != b at d={d}");
        ensure!((2.0 / c + (df - 1.0) / (df * c) - b).abs() < 1e-12, "second identity fails at d={d}");
        for eps in [0.05, 0.1, 0.2] {
            let seq = kahale_sequence(d, eps, 2, 200).unwrap();
            ensure!((seq.b - b).abs() < 1e-15 && (seq.c - c).abs() < 1e-15, "b, c differ at d={d}");
            ensure!(seq.all_ok(), "d={d} eps={eps}: checklist fails");
            ensure!(seq.nondecreasing(), "d={d} eps={eps}: x not nondecreasing");
            let cap = (1.0 / eps).ceil() as usize;
            ensure!(seq.x[cap - 1..].iter().all(|&x| x == c), "d={d} eps={eps}: x_i != c for i >= {cap}");
            let rigorous = 1 + ((c - 1.0 / c) / eps).ceil() as usize;
            ensure!(seq.x[rigorous - 1..].iter().all(|&x| x == c), "rigorous cap fails at d={d} eps={eps}");
        }
    }
    // As <= (b + 0.1) sqrt(d) s around {u, u'} on constructed instances
    let mut layers_checked = 0;
    for inst in [instances::lps(), instances::cubic()] {
        let sg = &inst.sg;
        let (d, r) = (sg.d, sg.r);
        let gh = oracle::girth(&oracle::adjacency(&inst.base)).unwrap();
        let h = (gh - 1) / 2;
        ensure!(h >= r + 2, "{}: base girth {gh} too small to reach past the leaves", inst.name);
        let seq = kahale_sequence(d, 0.1, r, h - r - 1).unwrap();
        let mu = (seq.b + 0.1) * (d as f64).sqrt();
        let adj = oracle::adjacency(&sg.graph);
        let site = &sg.sites[0];
        let x = [site.root_u, site.u_prime().unwrap()];
        let dist = oracle::bfs(&adj, &x);
        for v in 0..adj.len() {
            if dist[v] < h {
                let as_v: f64 = adj[v].iter().map(|&w| seq.s[dist[w]]).sum();
                let rhs = mu * seq.s[dist[v]];
                ensure!(
                    as_v <= rhs * (1.0 + 1e-12),
                    "{}: As = {as_v} > {rhs} at vertex {v} (layer {})",
                    inst.name,
                    dist[v]
                );
            }
        }
        let inst_s = KahaleInstance::from_layer_values(&sg.graph, &x, h, &seq.s, mu).unwrap();
        let verdict = kahale_check(&sg.graph, &inst_s, None).unwrap();
        ensure!(verdict.condition3 && verdict.s_positive, "{}: library checker disagrees", inst.name);
        layers_checked += h;
    }
    Ok(format!(
        "identities for d = 2..6, caps for eps in {{0.05, 0.1, 0.2}}, {layers_checked} layers of As <= mu s"
    ))
}

/// Criterion 6: Kahale's conditions around `{v'}`, and the conclusion for
/// the computed second eigenvector.
fn kahale() -> Outcome {
    let mut summary = Vec::new();
    for inst in [instances::mcgee(), instances::lps(), instances::cubic()] {
        let sg = &inst.sg;
        let d = sg.d;
        let adj = oracle::adjacency(&sg.graph);
        let gh = oracle::girth(&oracle::adjacency(&inst.base)).unwrap();
        let vp = sg.sites[0].v_prime().unwrap();
        let h_max = (1..).take_while(|&h| 2 * h < gh && oracle::ball_is_forest(&adj, &[vp], h)).last().unwrap_or(0);
        ensure!(h_max >= 1, "{}: no admissible radius around v'", inst.name);
        let mu = 2.0 * (d as f64).sqrt();
        for h in 1..=h_max {
            let radial = KahaleInstance::radial(&sg.graph, &[vp], h, d, mu).unwrap();
            let v = kahale_check(&sg.graph, &radial, None).unwrap();
            ensure!(v.condition1_ok(), "{} h={h}: layers not regular", inst.name);
            ensure!(v.condition2, "{} h={h}: s not constant on outer layers", inst.name);
            ensure!(v.condition3, "{} h={h}: As > mu s (excess {:e})", inst.name, v.worst_excess);
        }
        let opts = SpectralOptions::default();
        let pair = second_eigenpair(&sg.graph, &opts).map_err(|e| e.to_string())?;
        let defect = oracle::max_residual(&adj, &pair.vector, pair.lambda);
        let mut concluded = 0;
        for h in 1..=h_max {
            let matched = KahaleInstance::matched(&sg.graph, &[vp], h, pair.lambda).unwrap();
            let v = kahale_check(&sg.graph, &matched, Some(&pair.vector)).unwrap();
            if v.conditions_hold() {
                let c = v.conclusion.as_ref().ok_or("no conclusion computed")?;
                ensure!(c.applies, "{} h={h}: eigen-defect {:e} too large", inst.name, c.eigen_defect);
                ensure!(
                    c.holds,
                    "{} h={h}: mass ratio decreased ({} -> {})",
                    inst.name,
                    c.ratio_inner,
                    c.ratio_outer
                );
                concluded += 1;
            }
        }
        ensure!(concluded >= 1, "{}: conditions never held for the second eigenvector", inst.name);
        summary.push(format!(
            "{}: h <= {h_max}, lambda2 = {:.4} (defect {defect:.1e}), conclusion at {concluded} radii",
            inst.name, pair.lambda
        ));
    }
    for s in &summary {
        println!("      {s}");
    }
    Ok("conditions with s_i = d^(-i/2), mu = 2 sqrt d and the mass-ratio conclusion verified".into())
}

/// Criterion 7: k sites give k orthogonal localized eigenvectors per radial
/// eigenvalue; packing meets its lower bound.
fn multiplicity() -> Outcome {
    let big_cubic = base::random_high_girth(4000, 3, 9, 21).map_err(|e| e.to_string())?;
    let mut cases = 0;
    for (name, h, r) in [("lps(5,29)", instances::lps_base(), 1usize), ("cubic(4000)", &big_cubic, 2)] {
        for k in 2..=4 {
            let sg = multi_glue(h, k, r, 100 + k as u64).map_err(|e| format!("{name} k={k}: {e}"))?;
            let adj = oracle::adjacency(&sg.graph);
            let pairs = all_localized(&sg).unwrap();
            let radial = radial_spectrum(sg.d, r - 1).unwrap();
            for &lambda in &radial.eigenvalues {
                let vs: Vec<_> = pairs.iter().filter(|p| p.lambda == lambda).collect();
                ensure!(vs.len() == k, "{name} k={k}: {} vectors for lambda {lambda}", vs.len());
                for (i, a) in vs.iter().enumerate() {
                    let res = oracle::max_residual(&adj, &a.vector, lambda);
                    ensure!(res <= 1e-10, "{name} k={k}: residual {res:e}");
                    for b in &vs[i + 1..] {
                        let ip = oracle::dot(&a.vector, &b.vector);
                        ensure!(ip == 0.0, "{name} k={k}: inner product {ip}");
                    }
                }
            }
            cases += 1;
        }
    }
    let mut graphs: Vec<(String, Graph)> = vec![
        ("petersen".into(), families::petersen()),
        ("mcgee".into(), families::mcgee()),
        ("heawood".into(), families::heawood()),
        ("K6".into(), families::complete(6)),
        ("lps(5,29)".into(), instances::lps_base().clone()),
        ("cubic(4000)".into(), big_cubic),
    ];
    for (deg, seed) in [(3, 1u64), (4, 2), (5, 3), (6, 4)] {
        graphs.push((format!("random {deg}-regular"), base::random_regular(300, deg, seed).unwrap()));
    }
    let mut packings = 0;
    for (name, g) in &graphs {
        let adj = oracle::adjacency(g);
        let d = adj[0].len() - 1;
        for k in 1..=6 {
            let set = greedy_packing(g, k).unwrap();
            let bound = g.n() as f64 * (d as f64 - 1.0) / ((d as f64 + 1.0) * (d as f64).powi(k as i32));
            ensure!((bound - packing_bound(g.n(), d, k)).abs() < 1e-9, "packing bound bookkeeping");
            ensure!(set.len() as f64 >= bound, "{name} k={k}: {} < {bound}", set.len());
            for &a in &set {
                let dist = oracle::bfs(&adj, &[a]);
                ensure!(set.iter().all(|&b| b == a || dist[b] >= k), "{name} k={k}: two roots too close");
            }
            packings += 1;
        }
    }
    Ok(format!("{cases} multi-site constructions, {packings} packings meet the bound"))
}

/// Criterion 8: no eigenvector of a constructed graph is more localized than
/// the explicit lower bound allows.
fn localization_bound() -> Outcome {
    let mut scanned = 0;
    let mut tightest = f64::INFINITY;
    for inst in [instances::mcgee(), instances::cubic(), instances::quartic()] {
        let sg = &inst.sg;
        ensure!(sg.graph.n() <= 4096, "{} too large for a full scan", inst.name);
        let adj = oracle::adjacency(&sg.graph);
        let girth = oracle::girth(&adj).unwrap();
        let d = sg.d as f64;
        let (_, vectors) = oracle::dense_eigen(&adj);
        for eps in [0.1, 0.3, 0.5, 0.9] {
            let bound = eps * d.powf(eps * girth as f64 / 4.0) / (2.0 * d * d);
            ensure!((bound - localization_bounds(sg.d, girth, eps).gs_bound).abs() < 1e-12, "bound bookkeeping");
            for v in &vectors {
                let size = min_support_for_mass(v, eps).unwrap().size;
                ensure!(size == oracle::min_support(v, eps), "{}: support size disagrees with reference", inst.name);
                ensure!(size as f64 >= bound, "{} eps={eps}: support {size} < {bound}", inst.name);
                tightest = tightest.min(size as f64 / bound);
            }
        }
        scanned += vectors.len();
    }
    Ok(format!("{scanned} eigenvectors x 4 eps, zero violations (smallest ratio support/bound {tightest:.2})"))
}

/// Criterion 9: scarring witness of each localized eigenvector.
fn scarring() -> Outcome {
    let mut count = 0;
    let mut worst: f64 = 0.0;
    for inst in [instances::mcgee(), instances::lps(), instances::cubic(), instances::quartic()] {
        let sg = &inst.sg;
        let m = sg.graph.n();
        for p in all_localized(sg).unwrap() {
            let support = sg.sites[p.site].support();
            let expected = 1.0 - support.len() as f64 / m as f64;
            let w = scarring_witness(&p.vector, &support, m).unwrap();
            let frac = support.len() as f64 / m as f64;
            let mut a = vec![-frac; m];
            for &x in &support {
                a[x] += 1.0;
            }
            ensure!(a.iter().all(|x| x.abs() <= 1.0), "test function exceeds 1");
            let direct: f64 = (0..m).map(|x| a[x] * p.vector[x] * p.vector[x]).sum();
            ensure!((w.value - expected).abs() <= 1e-12, "{}: witness {} vs {expected}", inst.name, w.value);
            ensure!((direct - expected).abs() <= 1e-12, "{}: direct {direct} vs {expected}", inst.name);
            worst = worst.max((w.value - expected).abs());
            count += 1;
        }
    }
    Ok(format!("{count} localized eigenvectors, worst deviation {worst:.1e}"))
}

/// Criterion 10: determinism and certificate round-trip.
fn certificates() -> Outcome {
    let configs = [
        RunConfig {
            family: Some("mcgee".into()),
            seed: 3,
            ..RunConfig::default()
        },
        RunConfig {
            random: Some(RandomBase {
                n: 1000,
                degree: 3,
                min_girth: 9,
            }),
            r: Some(2),
            sites: 2,
            seed: 3,
            ..RunConfig::default()
        },
    ];
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (i, cfg) in configs.iter().enumerate() {
        let a = run_pipeline(cfg).map_err(|e| e.to_string())?;
        let b = run_pipeline(cfg).map_err(|e| e.to_string())?;
        ensure!(a.passed(), "config {i}: certificate did not pass");
        ensure!(
            a.certificate.canonical_json().unwrap() == b.certificate.canonical_json().unwrap(),
            "config {i}: certificates differ"
        );
        let path = dir.path().join(format!("cert{i}.json"));
        std::fs::write(&path, a.certificate.to_json().unwrap()).unwrap();
        let cert = Certificate::from_json(&std::fs::read_to_string(&path).unwrap()).map_err(|e| e.to_string())?;
        ensure!(cert == a.certificate, "config {i}: JSON round trip changed the certificate");
        let g = &a.scarred.graph;
        let report = verify_certificate(g, &cert);
        ensure!(report.ok, "config {i}: fresh certificate fails: {:?}", report.mismatches);

        let mut bad = cert.clone();
        bad.girth = Girth::Finite(bad.girth.finite().unwrap() + 2);
        ensure!(verify_certificate(g, &bad).fails_on("girth"), "girth tampering missed");
        let mut bad = cert.clone();
        bad.localized[0].values[0] = -bad.localized[0].values[0];
        ensure!(verify_certificate(g, &bad).fails_on("localized[0]"), "eigenvector tampering missed");
        let mut bad = cert.clone();
        bad.lambda_max_nontrivial += 1e-3;
        ensure!(verify_certificate(g, &bad).fails_on("lambda_max_nontrivial"), "spectral tampering missed");
        let base = load_base(&cfg.base_source().unwrap(), cfg.seed).unwrap();
        ensure!(verify_certificate(&base, &cert).fails_on("vertex_count"), "base graph accepted as the certified one");
    }
    let sg = instances::lps();
    let opts = CertOptions {
        base_ramanujan: Some(true),
        ..CertOptions::default()
    };
    let one = build_certificate(&sg.sg, &opts);
    let two = build_certificate(&sg.sg, &opts);
    ensure!(one.canonical_json().unwrap() == two.canonical_json().unwrap(), "lps certificate not deterministic");
    ensure!(one.spectral_method == Method::Iterative, "expected the iterative solver on the LPS instance");
    ensure!(one.passed, "lps certificate did not pass: {:?}", one.checks);
    ensure!(verify_certificate(&sg.sg.graph, &one).ok, "lps certificate fails verification");
    Ok("identical seeds give identical certificates; tampering with girth, eigenvectors, spectrum or graph is caught".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("pairing girth bound", pairing_girth),
        ("path-count formulas", path_counts),
        ("radial spectra", radial_spectra),
        ("end-to-end construction", end_to_end),
        ("spectral threshold identities", threshold_identities),
        ("Kahale checker", kahale),
        ("multiplicity and packing", multiplicity),
        ("localization lower bound", localization_bound),
        ("scarring witness", scarring),
        ("determinism and certificates", certificates),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("PASS criterion {id:>2} ({name}): {detail} [{:.1?}]", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id:>2} ({name}): {why} [{:.1?}]", start.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
