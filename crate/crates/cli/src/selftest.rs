//! Oracle cross-checks behind `rankdec selftest`.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use num_bigint::BigUint;
use rankdec::analysis::oracle::{enumerate_subspaces, intersection_fraction};
use rankdec::analysis::{
    count_rank_vectors, gaussian_binomial, lemma1_bound, lemma1_exact, lemma2_bound, lemma2_prob,
    lemma3_bound, lemma3_success_prob, ParamSet,
};
use rankdec::channel::{sample_error, sample_grassmannian, sample_instance, SeededRng};
use rankdec::ffield::{rank_qm, ExtElement, Field, FieldTower, Matrix, PrimeField};
use rankdec::gabidulin::{GabidulinCode, DEFAULT_LIST_CAP};
use rankdec::randdec::overlap_monte_carlo;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::args::{Level, SelftestArgs};

/// Significance level of the χ² uniformity checks.
pub const CHI2_ALPHA: f64 = 1e-3;
/// Allowed deviation of a Monte Carlo estimate, in binomial standard deviations.
pub const MC_SIGMAS: f64 = 4.0;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub tolerance: &'static str,
    pub passed: bool,
    pub detail: String,
}

type GaussFn = dyn Fn(u32, u32, u32) -> BigUint;

fn check(name: &'static str, tolerance: &'static str, run: impl FnOnce() -> Result<String, String>) -> CheckResult {
    let (passed, detail) = match run() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult {
        name,
        tolerance,
        passed,
        detail,
    }
}

fn core_err(e: rankdec::Error) -> String {
    e.to_string()
}

fn subspace_counts(max_n: usize, gauss: &GaussFn) -> Result<String, String> {
    let mut cases = 0;
    for q in [2, 3] {
        for n in 0..=max_n {
            for d in 0..=n {
                let got = enumerate_subspaces(n, d, q).map_err(core_err)?.len();
                let want = gauss(n as u32, d as u32, q);
                if BigUint::from(got) != want {
                    return Err(format!("q={q} n={n} d={d}: enumerated {got}, formula {want}"));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (n, d, q) cases"))
}

fn partition_identity(max: u32) -> Result<String, String> {
    for q in [2, 3] {
        for m in 1..=max {
            for n in 1..=max {
                let sum: BigUint = (0..=m.min(n)).map(|j| count_rank_vectors(m, n, j, q)).sum();
                if sum != BigUint::from(q).pow(m * n) {
                    return Err(format!("q={q} m={m} n={n}"));
                }
            }
        }
    }
    Ok(format!("m, n <= {max}, q in {{2, 3}}"))
}

fn lemma1_vs_enumeration(max_l: usize) -> Result<String, String> {
    let mut cases = 0;
    for q in [2, 3] {
        let f = PrimeField::new(q).map_err(core_err)?;
        for l in 1..=max_l {
            for u in 0..=l {
                let fixed = Matrix::from_fn(u, l, |i, j| if i == j { f.one() } else { f.zero() });
                for v in 0..=l {
                    for omega in 0..=u.min(v) {
                        let brute = intersection_fraction(l, &fixed, v, omega, q).map_err(core_err)?;
                        let exact = lemma1_exact(l as u32, u as u32, v as u32, omega as u32, q);
                        if &brute != exact.value() {
                            return Err(format!("q={q} l={l} u={u} v={v} omega={omega}: {brute} vs {}", exact.value()));
                        }
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{cases} (l, u, v, omega, q) cases, l <= {max_l}"))
}

/// All codewords within rank distance `w` of `r`, by enumerating messages.
pub fn codebook_search(code: &GabidulinCode, r: &[ExtElement], w: usize) -> rankdec::Result<BTreeSet<Vec<ExtElement>>> {
    let t = code.tower();
    let order = t.order();
    let total = order.pow(code.k() as u32);
    let mut out = BTreeSet::new();
    for index in 0..total {
        let mut rest = index;
        let msg: Vec<_> = (0..code.k())
            .map(|_| {
                let e = t.element(rest % order).expect("index below field order");
                rest /= order;
                e
            })
            .collect();
        let c = code.encode(&msg)?;
        let d: Vec<_> = r.iter().zip(&c).map(|(&x, &y)| t.sub(x, y)).collect();
        if rank_qm(t, &d) <= w {
            out.insert(c);
        }
    }
    Ok(out)
}

fn list_vs_codebook(m: usize, radii: &[usize], words: usize) -> Result<String, String> {
    let code = GabidulinCode::standard(FieldTower::new(2, m).map_err(core_err)?, m, 2).map_err(core_err)?;
    let mut rng = SeededRng::new(0x5e1f, 1);
    let mut total = 0;
    for &w in radii {
        for i in 0..words {
            // Alternate between near-codeword words and uniform words.
            let r = if i % 2 == 0 {
                sample_instance(&code, w, &mut rng).map_err(core_err)?.r
            } else {
                (0..m).map(|_| code.tower().random(&mut rng)).collect()
            };
            let list: BTreeSet<_> = code
                .list_close_codewords(&r, w, DEFAULT_LIST_CAP)
                .map_err(core_err)?
                .into_iter()
                .collect();
            let brute = codebook_search(&code, &r, w).map_err(core_err)?;
            if list != brute {
                return Err(format!("m={m} w={w}: list {} vs codebook {}", list.len(), brute.len()));
            }
            total += list.len();
        }
    }
    Ok(format!("(2,{m},{m},2), w in {radii:?}, {words} words each, {total} codewords listed"))
}

fn overlap_mc(samples: u64) -> Result<String, String> {
    let (n, k, delta, j, q) = (8, 2, 2, 4, 2);
    let hits = overlap_monte_carlo(n, k, delta, j, q, samples, &mut SeededRng::new(0x5e1f, 2)).map_err(core_err)?;
    let p = lemma2_prob(n as u32, k as u32, delta as u32, j as u32, q).to_f64();
    let rate = hits as f64 / samples as f64;
    let sigma = (p * (1.0 - p) / samples as f64).sqrt();
    let detail = format!("(n,k,delta,j)=({n},{k},{delta},{j}): {rate:.5} vs exact {p:.5}");
    if (rate - p).abs() <= MC_SIGMAS * sigma {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn unique_decoding(trials: usize) -> Result<String, String> {
    let code = GabidulinCode::standard(FieldTower::new(2, 24).map_err(core_err)?, 24, 16).map_err(core_err)?;
    let mut rng = SeededRng::new(0x5e1f, 3);
    for i in 0..trials {
        let inst = sample_instance(&code, code.unique_radius(), &mut rng).map_err(core_err)?;
        let out = code.decode_unique(&inst.r).map_err(core_err)?;
        if out.message() != Some(inst.msg.as_slice()) {
            return Err(format!("trial {i} not recovered"));
        }
    }
    Ok(format!("{trials} rank-4 errors at (2,24,24,16)"))
}

fn bound_dominance() -> Result<String, String> {
    let mut points = 0;
    for l in 1..=8u32 {
        for u in 0..=l {
            for v in 0..=l {
                for omega in 0..=u.min(v) {
                    if !lemma1_bound(l, u, v, omega, 2).dominates(lemma1_exact(l, u, v, omega, 2).value()) {
                        return Err(format!("intersection bound at l={l} u={u} v={v} omega={omega}"));
                    }
                    points += 1;
                }
            }
        }
    }
    for (n, k) in [(8, 2), (10, 4), (12, 4)] {
        for delta in 0..=n - k {
            for j in 0..=n - k {
                if !lemma2_bound(n, k, delta, j, 2).dominates(lemma2_prob(n, k, delta, j, 2).value()) {
                    return Err(format!("overlap bound at n={n} k={k} delta={delta} j={j}"));
                }
                points += 1;
            }
        }
        for w in (n - k) / 2 + 1..=n - k {
            let p = ParamSet::new(2, n, n, k, w).map_err(core_err)?;
            for delta in 0..=n - k {
                if !lemma3_bound(&p, delta).dominates(lemma3_success_prob(&p, delta).value()) {
                    return Err(format!("success bound at {p} delta={delta}"));
                }
                points += 1;
            }
        }
    }
    Ok(format!("{points} grid points"))
}

fn chi2_p_value(counts: &HashMap<Vec<Vec<u32>>, u64>, categories: u64, draws: u64) -> Result<f64, String> {
    if counts.len() as u64 > categories {
        return Err(format!("{} distinct outcomes, expected at most {categories}", counts.len()));
    }
    let expected = draws as f64 / categories as f64;
    let observed = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum::<f64>();
    let missing = (categories - counts.len() as u64) as f64 * expected;
    let dist = ChiSquared::new((categories - 1) as f64).map_err(|e| e.to_string())?;
    Ok(dist.sf(observed + missing))
}

fn grassmannian_uniformity(draws: u64) -> Result<String, String> {
    let (n, d, q) = (4, 2, 2);
    let f = PrimeField::new(q).map_err(core_err)?;
    let mut rng = SeededRng::new(0x5e1f, 4);
    let mut counts = HashMap::new();
    for _ in 0..draws {
        let s = sample_grassmannian(n, d, q, &mut rng).map_err(core_err)?;
        *counts.entry(s.rref(&f).0.to_rows()).or_insert(0) += 1;
    }
    let categories = gaussian_binomial(n as u32, d as u32, q).try_into().expect("small count");
    let p = chi2_p_value(&counts, categories, draws)?;
    let detail = format!("{draws} draws over {categories} planes of F_2^4, p = {p:.4}");
    if p > CHI2_ALPHA {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rank_error_uniformity(draws: u64) -> Result<String, String> {
    let tower = FieldTower::new(2, 2).map_err(core_err)?;
    let (n, w) = (3, 1);
    let mut rng = SeededRng::new(0x5e1f, 5);
    let mut counts = HashMap::new();
    for _ in 0..draws {
        let e = sample_error(&tower, n, w, &mut rng).map_err(core_err)?.e;
        *counts.entry(e.iter().map(|&x| tower.coeffs(x)).collect()).or_insert(0) += 1;
    }
    let categories = count_rank_vectors(2, n as u32, w as u32, 2).try_into().expect("small count");
    let p = chi2_p_value(&counts, categories, draws)?;
    let detail = format!("{draws} draws over {categories} rank-1 vectors of F_4^3, p = {p:.4}");
    if p > CHI2_ALPHA {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Runs every check of `level`. With `inject_fault` the Gaussian binomial
/// `[4, 2]_2` is off by one, which the enumeration check must catch.
pub fn run_checks(level: Level, inject_fault: bool) -> Vec<CheckResult> {
    let gauss: Box<GaussFn> = if inject_fault {
        Box::new(|a, b, q| gaussian_binomial(a, b, q) + u32::from((a, b, q) == (4, 2, 2)))
    } else {
        Box::new(gaussian_binomial)
    };
    let full = level == Level::Full;
    let mut out = vec![
        check("subspace enumeration vs Gaussian binomial", "exact", || {
            subspace_counts(if full { 5 } else { 4 }, gauss.as_ref())
        }),
        check("rank-weight partition of F_q^(m x n)", "exact", || {
            partition_identity(if full { 8 } else { 6 })
        }),
        check("intersection probability vs Grassmannian enumeration", "exact", || {
            lemma1_vs_enumeration(if full { 5 } else { 3 })
        }),
        check("list decoding vs codebook search", "exact set equality", || {
            if full {
                list_vs_codebook(8, &[2, 3, 4], 6)
            } else {
                list_vs_codebook(6, &[2, 3], 4)
            }
        }),
        check("overlap Monte Carlo vs exact probability", "4 sigma", || {
            overlap_mc(if full { 200_000 } else { 20_000 })
        }),
        check("unique decoding at full radius", "100% recovery", || {
            unique_decoding(if full { 1000 } else { 100 })
        }),
        check("exact probabilities below closed-form bounds", "exact", bound_dominance),
    ];
    if full {
        out.push(check("Grassmannian sampler uniformity", "chi-square p > 0.001", || {
            grassmannian_uniformity(100_000)
        }));
        out.push(check("rank-error sampler uniformity", "chi-square p > 0.001", || {
            rank_error_uniformity(100_000)
        }));
    }
    out
}

/// Prints one line per check and returns whether all passed.
pub fn cmd_selftest(a: &SelftestArgs) -> bool {
    let start = Instant::now();
    let results = run_checks(a.level, a.inject_fault);
    for r in &results {
        println!(
            "[{}] {} (tolerance: {}): {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.tolerance,
            r.detail
        );
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "{} checks, {failed} failed, {:.1} s",
        results.len(),
        start.elapsed().as_secs_f64()
    );
    failed == 0
}
