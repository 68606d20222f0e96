//! Acceptance suite. Prints one `criterion N: PASS|FAIL: detail` line per
//! criterion.
//!
//! Criteria listed in `EXPECTED_FAILURES` are reported but do not fail the
//! process unless `UMTLAB_ACCEPTANCE_STRICT` is set; any other failure does.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use umtlab_cli::output::{write_aggregate, write_cells};
use umtlab_core::bounds::*;
use umtlab_core::combinatorics::{partition3, partition4};
use umtlab_core::experiments::{
    certify_ambiguity_bound, preset, run_experiment, AggregateRow, CertifyConfig, ExperimentOutput, SampleCount,
    PRESET_NAMES,
};
use umtlab_core::learner::{kg_scores, mle_objective};
use umtlab_core::models::{gen_kg, gen_rt, kg_prior, KgParams, RtParams};
use umtlab_core::rng::{mix, stream};
use umtlab_core::{TextId, TranslatorFamily};

/// Criteria that fail under the specified model; see the README.
const EXPECTED_FAILURES: &[u32] = &[1, 2];

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;
type Criterion = Box<dyn Fn(&mut Runs) -> Outcome>;

#[derive(Default)]
struct Runs(HashMap<&'static str, ExperimentOutput>);

impl Runs {
    fn get(&mut self, name: &'static str) -> Result<&ExperimentOutput, umtlab_core::Error> {
        if !self.0.contains_key(name) {
            let output = run_experiment(&preset(name)?, Some(1))?;
            self.0.insert(name, output);
        }
        Ok(&self.0[name])
    }

    fn timed(&mut self, name: &'static str) -> Result<(&ExperimentOutput, Duration), umtlab_core::Error> {
        let start = Instant::now();
        self.0.remove(name);
        self.get(name)?;
        Ok((&self.0[name], start.elapsed()))
    }
}

/// Rows of one metric keyed by alpha (as written) and ordered by m.
fn curves<'a>(
    rows: &'a [AggregateRow],
    metric: &str,
    key: impl Fn(&AggregateRow) -> String,
) -> BTreeMap<String, Vec<&'a AggregateRow>> {
    let mut out: BTreeMap<String, Vec<&AggregateRow>> = BTreeMap::new();
    for row in rows.iter().filter(|r| r.metric == metric) {
        out.entry(key(row)).or_default().push(row);
    }
    for curve in out.values_mut() {
        curve.sort_by_key(|r| r.m);
    }
    out
}

fn alpha_key(row: &AggregateRow) -> String {
    row.columns.alpha.map(|a| a.to_string()).unwrap_or_default()
}

fn combined(a: &AggregateRow, b: &AggregateRow) -> f64 {
    a.stderr.hypot(b.stderr)
}

fn criterion_1(runs: &mut Runs) -> Outcome {
    let (output, elapsed) = runs.timed("fig4-left")?;
    let curves = curves(&output.aggregate, "error", alpha_key);
    let mut violations = Vec::new();
    for (alpha, curve) in &curves {
        for w in curve.windows(2) {
            let slack = combined(w[0], w[1]);
            if w[1].mean - w[0].mean > slack {
                violations.push(format!("α={alpha} m={}: +{:.4} > {:.4}", w[0].m, w[1].mean - w[0].mean, slack));
            }
        }
    }
    let last = |a: &str| *curves[a].last().unwrap();
    let (zero, one) = (last("0"), last("1"));
    let ordered = zero.mean - one.mean > combined(zero, one);
    let fast = elapsed < Duration::from_secs(600);
    let detail = format!(
        "{:.1}s; final error α=0 {:.4}±{:.4}, α=1 {:.4}±{:.4}; {} monotonicity violations{}",
        elapsed.as_secs_f64(),
        zero.mean,
        zero.stderr,
        one.mean,
        one.stderr,
        violations.len(),
        if violations.is_empty() { String::new() } else { format!(" ({})", violations.join(", ")) }
    );
    Ok((fast && ordered && violations.is_empty(), detail))
}

fn criterion_2(runs: &mut Runs) -> Outcome {
    let output = runs.get("fig4-right")?;
    let curves = curves(&output.aggregate, "error", |r| r.columns.r.unwrap().to_string());
    let detail: Vec<String> = ["1", "4", "7", "10"]
        .iter()
        .map(|r| format!("r={r} {:.4}±{:.4}", curves[*r][0].mean, curves[*r][0].stderr))
        .collect();
    let (r1, r10) = (curves["1"][0], curves["10"][0]);
    Ok((r1.mean - r10.mean > combined(r1, r10), detail.join(", ")))
}

fn criterion_3(runs: &mut Runs) -> Outcome {
    let (output, elapsed) = runs.timed("fig5")?;
    let curves = curves(&output.aggregate, "plausible_avg_error", alpha_key);
    let mut ok = elapsed < Duration::from_secs(900);
    let mut parts = vec![format!("{:.1}s", elapsed.as_secs_f64())];
    for (alpha, curve) in &curves {
        let (first, last) = (curve[0], *curve.last().unwrap());
        if alpha == "0" {
            let flat = curve.iter().all(|r| r.mean == first.mean && r.stderr == first.stderr);
            ok &= flat;
            parts.push(format!("α=0 constant {flat} at {}", first.mean));
        } else {
            let drop = first.mean - last.mean;
            ok &= drop > combined(first, last);
            parts.push(format!("α={alpha} {:.3}->{:.3}", first.mean, last.mean));
        }
    }
    Ok((ok, parts.join(", ")))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for seed in 1..=5 {
        let report = certify_ambiguity_bound(&CertifyConfig { seed, ..CertifyConfig::default() })?;
        ok &= report.passed && report.family_size == 120;
        parts.push(format!(
            "seed {seed}: ε_γ {:.4}, {}/{} ≥ {:.4}",
            report.epsilon_gamma,
            report.successes,
            report.trials,
            report.target - report.slack
        ));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(60);
    Ok((ok, format!("{:.1}s; {}", elapsed.as_secs_f64(), parts.join("; "))))
}

fn argmin_set<T: PartialOrd + Copy>(values: &[T]) -> Vec<usize> {
    let min = values.iter().copied().fold(values[0], |a, b| if b < a { b } else { a });
    (0..values.len()).filter(|&i| values[i] == min).collect()
}

fn criterion_5() -> Outcome {
    let mut rng = stream(5, "acceptance/mle-score");
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for instance in 0..100u64 {
        let r = rng.random_range(1..=5);
        let n = rng.random_range(r..=6);
        let params = KgParams { n, r, p: rng.random_range(0.1..0.9), alpha: rng.random_range(0.0..=1.0) };
        let inst = gen_kg(mix(5, instance), params)?;
        let rho = kg_prior(&inst.plausible, n)?;
        let m = rng.random_range(1..40);
        let random = inst.mu.sampler().sample_n(&mut stream(instance, "acceptance/samples"), m);
        for samples in [&inst.t_edges, &random] {
            let scores = kg_scores(&inst.family, &inst.plausible, samples)?;
            let objectives = (0..inst.family.len())
                .map(|theta| mle_objective(samples, &rho, &inst.family, theta))
                .collect::<Result<Vec<f64>, _>>()?;
            checked += 1;
            if argmin_set(&objectives) != argmin_set(&scores) {
                mismatches.push(format!("instance {instance} r={r} n={n}"));
            }
        }
    }
    Ok((mismatches.is_empty(), format!("{checked} sample sets, {} mismatches {mismatches:?}", mismatches.len())))
}

fn within_three_sigma(hits: u64, trials: u64, prob: f64) -> (bool, f64) {
    let sigma = (prob * (1.0 - prob) / trials as f64).sqrt();
    let z = (hits as f64 / trials as f64 - prob) / sigma;
    (z.abs() <= 3.0, z)
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, alpha) in [(0.5, 0.5), (0.3, 0.0), (0.6, 0.9)] {
        let params = KgParams { n: 8, r: 5, p, alpha };
        let (mut pairs, mut in_t, mut t_not_p, mut skipped) = (0u64, 0u64, 0u64, 0);
        for seed in 0..10_000u64 {
            let inst = gen_kg(mix(6, seed), params)?;
            if inst.degenerate {
                skipped += 1;
                continue;
            }
            let star = inst.star_index();
            pairs += (params.r * params.r) as u64;
            in_t += inst.t_edges.len() as u64;
            t_not_p += inst.t_edges.iter().filter(|&&x| !inst.in_p(inst.family.translate(star, x))).count() as u64;
        }
        let (ok_t, z_t) = within_three_sigma(in_t, pairs, p);
        let (ok_tp, z_tp) = within_three_sigma(t_not_p, pairs, (1.0 - alpha) * p * (1.0 - p));
        ok &= ok_t && ok_tp;
        parts.push(format!("p={p} α={alpha}: z {z_t:+.2}/{z_tp:+.2} ({skipped} degenerate skipped)"));
    }
    Ok((ok, parts.join("; ")))
}

fn criterion_7() -> Outcome {
    let mut failures = 0;
    for seed in 0..1000u64 {
        let mut rng = stream(seed, "acceptance/partition3");
        let size = rng.random_range(1..=200);
        let mut perm: Vec<TextId> = (0..size as TextId).collect();
        perm.shuffle(&mut rng);
        let res = partition3(&perm)?;
        if !(res.parts.len() == 3 && res.covers_moved_set() && res.parts_avoid_own_image(&perm)) {
            failures += 1;
        }
    }
    for seed in 0..1000u64 {
        let mut rng = stream(seed, "acceptance/partition4");
        let mut ids: Vec<TextId> = (0..512).collect();
        ids.shuffle(&mut rng);
        ids.truncate(200);
        let mut image = ids.clone();
        image.shuffle(&mut rng);
        let mut perm: Vec<TextId> = (0..512).collect();
        for (&a, &b) in ids.iter().zip(&image) {
            perm[a as usize] = b;
        }
        let res = partition4(&perm, |y| y / 8, 8)?;
        let balanced = res.parts.iter().all(|part| {
            let mut per_prefix: HashMap<TextId, usize> = HashMap::new();
            for &y in part {
                *per_prefix.entry(y / 8).or_default() += 1;
            }
            per_prefix.values().all(|&c| 2 * c <= 8)
        });
        if !(res.parts.len() == 4 && res.covers_moved_set() && res.parts_avoid_own_image(&perm) && balanced) {
            failures += 1;
        }
    }
    let mut rt_failures = 0;
    for seed in 0..100u64 {
        let (a, b) = (1 + (seed % 2) as usize, 2 + (seed % 3) as usize);
        let depth = 1 + (seed % 4) as usize;
        let inst = gen_rt(seed, RtParams::new(4 * b, depth, a, b))?;
        let distinct = inst.child_labels.iter().all(|labels| {
            let mut sorted = labels.clone();
            sorted.sort_unstable();
            sorted.dedup();
            sorted.len() == labels.len()
        });
        if !(distinct && inst.t_texts.len() == a.pow(depth as u32) && inst.p_texts.len() == b.pow(depth as u32)) {
            rt_failures += 1;
        }
    }
    Ok((
        failures == 0 && rt_failures == 0,
        format!("{failures}/2000 partition failures, {rt_failures}/100 tree-language failures"),
    ))
}

fn close(got: f64, want: f64) -> bool {
    if want == 0.0 {
        got == 0.0
    } else {
        ((got - want) / want).abs() <= 1e-12
    }
}

fn count(c: u128) -> ThetaCount {
    ThetaCount::from_count(c).unwrap()
}

fn criterion_8() -> Outcome {
    let mut misses = Vec::new();
    let mut check = |name: &str, got: f64, want: f64| {
        if !close(got, want) {
            misses.push(format!("{name}: {got} vs {want}"));
        }
    };
    for (m, n, r, p, alpha, delta, want) in oracles::KG {
        check("kg", kg_bound(&KgBoundParams { m, n, r, p, alpha, delta })?.value, want);
    }
    for (m, t_size, theta, alpha, delta, want) in oracles::CN {
        let p = CnBoundParams { m, t_size, theta: count(theta), alpha, delta, proof_form: false };
        check("cn", cn_bound(&p)?.value, want);
    }
    for (m, t_size, theta, alpha, want) in oracles::CN_LOWER {
        let p = CnLowerBoundParams { m, t_size, theta: count(theta), alpha, c2: DEFAULT_LOWER_BOUND_CONSTANT };
        check("cn-lower", cn_lower_bound(&p)?.value, want);
    }
    for (m, a, depth, words, delta, want) in oracles::RT {
        let p = RtBoundParams { m, a, depth, theta: ThetaCount::factorial(words), delta };
        check("rt", rt_bound(&p)?.value, want);
    }
    for (m, theta, delta, want) in oracles::GAMMA {
        check("gamma", gamma_threshold(m, count(theta), delta)?, want);
    }
    for (m, theta, delta, realizable, loss, want) in oracles::OCCAM {
        check("occam", occam_bound(m, count(theta), delta, realizable, loss)?.value, want);
    }
    let theta = count(100_000);
    let mut previous = [f64::INFINITY; 5];
    let mut sweep_failures = 0;
    for m in [1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6, f64::INFINITY] {
        let current = [
            kg_bound(&KgBoundParams { m, n: 10, r: 9, p: 0.5, alpha: 0.5, delta: 0.01 })?.value,
            cn_bound(&CnBoundParams { m, t_size: 1e5, theta, alpha: 0.5, delta: 0.01, proof_form: false })?.value,
            rt_bound(&RtBoundParams { m, a: 3, depth: 8, theta, delta: 0.01 })?.value,
            gamma_threshold(m, theta, 0.01)?,
            occam_bound(m, theta, 0.01, false, 0.1)?.value,
        ];
        sweep_failures += current.iter().zip(&previous).filter(|(c, p)| c > p).count();
        previous = current;
    }
    Ok((
        misses.is_empty() && sweep_failures == 0,
        format!("60 oracle tuples, {} misses {misses:?}; {sweep_failures} sweep violations", misses.len()),
    ))
}

fn csv_bytes(output: &ExperimentOutput) -> Result<(Vec<u8>, Vec<u8>), csv::Error> {
    let (mut cells, mut aggregate) = (Vec::new(), Vec::new());
    write_cells(&output.cells, &mut cells)?;
    write_aggregate(&output.aggregate, &mut aggregate)?;
    Ok((cells, aggregate))
}

fn criterion_9(runs: &mut Runs) -> Outcome {
    let mut differing = Vec::new();
    for &name in PRESET_NAMES {
        let baseline = csv_bytes(runs.get(name)?)?;
        let rerun = csv_bytes(&run_experiment(&preset(name)?, Some(4))?)?;
        if baseline != rerun {
            differing.push(name);
        }
    }
    Ok((differing.is_empty(), format!("{} presets at 1 and 4 threads, differing: {differing:?}", PRESET_NAMES.len())))
}

fn criterion_10(runs: &mut Runs) -> Outcome {
    let output = runs.get("lb-floor")?;
    let mut ok = true;
    let mut parts = Vec::new();
    let mut means = Vec::new();
    for m in [40, 80] {
        let (mut with_full, mut positive, mut total_err, mut seeds) = (0, 0, 0.0, 0);
        for cell in &output.cells {
            let at = |metric: &str| {
                cell.measurements.iter().find(|x| x.m == SampleCount::Finite(m) && x.metric == metric).map(|x| x.value)
            };
            let (full, error) = (at("full_rows").unwrap(), at("mle_error").unwrap());
            seeds += 1;
            total_err += error;
            if full > 0.0 {
                with_full += 1;
                positive += usize::from(error > 0.0);
            }
        }
        let fraction = positive as f64 / with_full as f64;
        ok &= fraction >= 0.95;
        means.push(total_err / seeds as f64);
        parts.push(format!(
            "m={m}: err>0 in {positive}/{with_full} seeds with a full row, mean {:.4}",
            means.last().unwrap()
        ));
    }
    ok &= means[1] <= means[0];
    Ok((ok, parts.join("; ")))
}

fn main() {
    let strict = std::env::var_os("UMTLAB_ACCEPTANCE_STRICT").is_some();
    let mut runs = Runs::default();
    let mut unexpected = 0;
    let criteria: Vec<(u32, Criterion)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(criterion_2)),
        (3, Box::new(criterion_3)),
        (4, Box::new(|_| criterion_4())),
        (5, Box::new(|_| criterion_5())),
        (6, Box::new(|_| criterion_6())),
        (7, Box::new(|_| criterion_7())),
        (8, Box::new(|_| criterion_8())),
        (10, Box::new(criterion_10)),
        (9, Box::new(criterion_9)),
    ];
    let mut lines = BTreeMap::new();
    for (id, criterion) in criteria {
        let (pass, detail) = criterion(&mut runs).unwrap_or_else(|e| (false, format!("error: {e}")));
        let line = format!("criterion {id}: {}: {detail}", if pass { "PASS" } else { "FAIL" });
        println!("{line}");
        lines.insert(id, line);
        if !pass && (strict || !EXPECTED_FAILURES.contains(&id)) {
            unexpected += 1;
        }
    }
    println!("summary:");
    for line in lines.values() {
        println!("  {}", line.split(": ").take(2).collect::<Vec<_>>().join(": "));
    }
    if unexpected > 0 {
        eprintln!("{unexpected} unexpected acceptance failure(s)");
        std::process::exit(1);
    }
}
