//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any of them fails.

use std::alloc::{GlobalAlloc, Layout, System};
use std::panic::{self, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rand::Rng;
use sahn::fixtures::{self, random_integer, random_real};
use sahn::formulas::{check_reducibility, closed_form_dissimilarity, update_distance, SizeTriple};
use sahn::linkage::{linkage, linkage_with_stats, Algorithm};
use sahn::nnchain::nn_chain_core_unchecked;
use sahn::oracle::{
    enumerate_valid_dendrograms, primitive_clustering, validate, validate_dendrogram, TieBreak, Verdict,
};
use sahn::postprocess::{finish, label};
use sahn::vector::{generic_linkage_variant, mst_linkage_vectors, pairwise_dissimilarity};
use sahn::{CondensedMatrix, Method, Metric, StepwiseDendrogram, UnsortedDendrogram, VectorDataset};
use sahn_bench::gen_gaussian_mixture;

/// Tracks live and peak heap bytes.
struct Counting;

static LIVE: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            let live = LIVE.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(live, Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        LIVE.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

#[global_allocator]
static ALLOC: Counting = Counting;

/// Peak heap growth while running `f`.
fn peak_extra<T>(f: impl FnOnce() -> T) -> (T, usize) {
    let base = LIVE.load(Ordering::Relaxed);
    PEAK.store(base, Ordering::Relaxed);
    let out = f();
    (out, PEAK.load(Ordering::Relaxed) - base)
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

const MATRIX_ALGORITHMS: [Algorithm; 4] = [
    Algorithm::Generic,
    Algorithm::NnChain,
    Algorithm::Mst,
    Algorithm::Anderberg,
];

fn check_all(d0: &CondensedMatrix, m: Method, runs: &mut usize) -> Result<(), String> {
    for a in MATRIX_ALGORITHMS {
        if a.supports(m).is_err() {
            continue;
        }
        let d = linkage(d0, a, m).map_err(|e| e.to_string())?;
        let verdict = validate(d0, m, &d);
        ensure(verdict.is_valid(), || {
            format!("{} {} on {:?}: {}", a, m, d0.values(), verdict)
        })?;
        *runs += 1;
    }
    Ok(())
}

fn oracle_battery() -> Outcome {
    let start = Instant::now();
    let mut rng = fixtures::rng(1);
    let mut runs = 0;
    for m in Method::NAMED {
        for n in 2..=12 {
            for i in 0..500 {
                // Few distinct values make ties common.
                let levels = 2 + i % 4;
                check_all(&random_integer(n, levels, &mut rng), m, &mut runs)?;
            }
        }
        for n in 13..=40 {
            for _ in 0..200 {
                check_all(&random_real(n, &mut rng), m, &mut runs)?;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 300.0, || format!("took {:.1}s, over the 5 minute budget", secs))?;
    Ok(format!("{} validated runs in {:.1}s", runs, secs))
}

fn tie_cross_check() -> Outcome {
    let mut rng = fixtures::rng(2);
    let mut checked = 0;
    for m in Method::NAMED {
        for n in 2..=7 {
            for _ in 0..30 {
                let d0 = random_integer(n, 3, &mut rng);
                let set = enumerate_valid_dendrograms(&d0, m).map_err(|e| e.to_string())?;
                for a in MATRIX_ALGORITHMS {
                    if a.supports(m).is_err() {
                        continue;
                    }
                    let d = linkage(&d0, a, m).map_err(|e| e.to_string())?;
                    ensure(set.contains(&d, sahn::oracle::DEFAULT_TOLERANCE), || {
                        format!(
                            "{} {} output {:?} not enumerated for {:?}",
                            a,
                            m,
                            d.scipy_rows(),
                            d0.values()
                        )
                    })?;
                    checked += 1;
                }
            }
        }
    }
    let cand = StepwiseDendrogram::from_scipy(3, &[(0, 1, 2.0), (2, 3, 2.0)]).unwrap();
    ensure(
        validate(&fixtures::dataset_a(), Method::Single, &cand).is_valid(),
        || "rejected on (A)".into(),
    )?;
    ensure(
        validate(&fixtures::dataset_b(), Method::Single, &cand).is_valid(),
        || "rejected on (B)".into(),
    )?;
    ensure(
        !validate(&fixtures::dataset_c(), Method::Single, &cand).is_valid(),
        || "accepted on (C)".into(),
    )?;
    Ok(format!("{} outputs enumerated; fixtures A/B/C as expected", checked))
}

fn heights(d: &StepwiseDendrogram) -> Vec<f64> {
    d.steps().iter().map(|s| s.delta).collect()
}

fn additive_counterexample() -> Outcome {
    let d0 = fixtures::additive_counterexample();
    let m = fixtures::additive_method();
    let primitive = primitive_clustering(&d0, m, TieBreak::default()).map_err(|e| e.to_string())?;
    ensure(heights(&primitive) == [1.0, 3.0, 27.0, 85.0], || {
        format!("primitive heights {:?}", heights(&primitive))
    })?;
    ensure(validate_dendrogram(&d0, m, &primitive, 0.0).is_valid(), || {
        "primitive output rejected".into()
    })?;
    let chain = finish(nn_chain_core_unchecked(&d0, m)).map_err(|e| e.to_string())?;
    ensure(heights(&chain) == [1.0, 3.0, 28.0, 87.0], || {
        format!("chain heights {:?}", heights(&chain))
    })?;
    match validate_dendrogram(&d0, m, &chain, 0.0) {
        Verdict::Invalid { step: 2, reason } => Ok(format!(
            "primitive 1,3,27,85; chain 1,3,28,87 rejected at step 2 ({})",
            reason
        )),
        other => Err(format!("chain verdict: {}", other)),
    }
}

fn inversions() -> Outcome {
    let tri = fixtures::equilateral();
    let pts = VectorDataset::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.5, 0.75f64.sqrt()]]).unwrap();
    let expected = 0.75f64.sqrt();
    for m in [Method::Centroid, Method::Median] {
        for d in [
            sahn::generic_linkage(&tri, m).unwrap(),
            generic_linkage_variant(&pts, m).unwrap(),
        ] {
            let h = heights(&d);
            ensure((h[0] - 1.0).abs() < 1e-9 && (h[1] - expected).abs() < 1e-9, || {
                format!("{}: {:?}", m, h)
            })?;
        }
    }
    for d in [
        sahn::generic_linkage(&tri, Method::Ward).unwrap(),
        generic_linkage_variant(&pts, Method::Ward).unwrap(),
    ] {
        let h = heights(&d);
        ensure((h[1] - 1.0).abs() < 1e-9, || format!("ward: {:?}", h))?;
    }
    Ok(format!("centroid/median second merge {:.7}, ward 1.0", expected))
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Largest relative gap between recursive Ward updates along a random merge
/// order and the closed form, on Euclidean input.
fn ward_gap(rng: &mut impl Rng, n: usize) -> f64 {
    let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.random(), rng.random()]).collect();
    let d0 = CondensedMatrix::from_fn(n, |i, j| {
        ((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2)).sqrt()
    })
    .unwrap();
    let mut clusters: Vec<(Vec<usize>, Vec<f64>)> = (0..n)
        .map(|i| {
            (
                vec![i],
                (0..n)
                    .map(|j| if i == j { 0.0 } else { d0.get(i, j).powi(2) })
                    .collect(),
            )
        })
        .collect();
    // Each cluster carries its squared distance to every cluster, indexed by
    // position in `clusters`.
    let mut worst: f64 = 0.0;
    while clusters.len() > 1 {
        let a = rng.random_range(0..clusters.len());
        let mut b = rng.random_range(0..clusters.len() - 1);
        if b >= a {
            b += 1;
        }
        let d_ab = clusters[a].1[b];
        let (sa, sb) = (clusters[a].0.len(), clusters[b].0.len());
        let mut merged_d = Vec::new();
        for x in 0..clusters.len() {
            if x == a || x == b {
                continue;
            }
            let sizes = SizeTriple::new(sa, sb, clusters[x].0.len()).unwrap();
            merged_d.push(update_distance(Method::Ward, clusters[a].1[x], clusters[b].1[x], d_ab, sizes).unwrap());
        }
        let mut members = clusters[a].0.clone();
        members.extend(&clusters[b].0);
        let keep: Vec<usize> = (0..clusters.len()).filter(|&x| x != a && x != b).collect();
        let mut next: Vec<(Vec<usize>, Vec<f64>)> = keep
            .iter()
            .enumerate()
            .map(|(p, &x)| {
                let mut row: Vec<f64> = keep.iter().map(|&y| clusters[x].1[y]).collect();
                row.push(merged_d[p]);
                (clusters[x].0.clone(), row)
            })
            .collect();
        let mut row = merged_d.clone();
        row.push(0.0);
        next.push((members, row));
        clusters = next;
        let last = clusters.len() - 1;
        for x in 0..last {
            let closed = closed_form_dissimilarity(Method::Ward, &clusters[x].0, &clusters[last].0, &d0).unwrap();
            worst = worst.max(relative(clusters[x].1[last].sqrt(), closed));
        }
    }
    worst
}

fn identities() -> Outcome {
    let mut rng = fixtures::rng(5);
    let mut ward_worst: f64 = 0.0;
    let mut quarter_worst: f64 = 0.0;
    let ones = SizeTriple::singletons();
    for i in 0..10_000 {
        ward_worst = ward_worst.max(ward_gap(&mut rng, 2 + i % 9));
        let d0 = random_real(4, &mut rng);
        let g = |i, j| d0.get(i, j);
        let w = |x, y, z, s| update_distance(Method::Weighted, x, y, z, s).unwrap();
        let ij_k = w(g(0, 2), g(1, 2), g(0, 1), ones);
        let ij_l = w(g(0, 3), g(1, 3), g(0, 1), ones);
        let merged = w(ij_k, ij_l, g(2, 3), SizeTriple::new(2, 2, 1).unwrap());
        let expected = (g(0, 2) + g(0, 3) + g(1, 2) + g(1, 3)) / 4.0;
        quarter_worst = quarter_worst.max(relative(merged, expected));
    }
    ensure(ward_worst <= 1e-9, || format!("Ward relative gap {:e}", ward_worst))?;
    ensure(quarter_worst <= 1e-12, || {
        format!("weighted relative gap {:e}", quarter_worst)
    })?;
    for m in [
        Method::Single,
        Method::Complete,
        Method::Average,
        Method::Weighted,
        Method::Ward,
    ] {
        let r = check_reducibility(m, 100_000, 50, 11).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{} not reducible: {:?}", m, r))?;
    }
    let centroid = check_reducibility(Method::Centroid, 100_000, 50, 11).map_err(|e| e.to_string())?;
    ensure(!centroid.passed(), || "no centroid counterexample".into())?;
    Ok(format!(
        "ward gap {:.1e}, weighted gap {:.1e}, centroid counterexample found",
        ward_worst, quarter_worst
    ))
}

fn timed(d0: &CondensedMatrix, a: Algorithm, m: Method) -> (f64, sahn::LinkageStats) {
    let mut times = Vec::new();
    let mut stats = Default::default();
    for _ in 0..3 {
        let t = Instant::now();
        stats = linkage_with_stats(d0, a, m).unwrap().1;
        times.push(t.elapsed().as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    (times[1], stats)
}

fn gaussian_matrix(n: usize) -> CondensedMatrix {
    let ds = gen_gaussian_mixture(n, 3, 5, None, n as u64).unwrap();
    pairwise_dissimilarity(&ds, &Metric::Euclidean).unwrap()
}

fn scaling() -> Outcome {
    let mut report = Vec::new();
    let sizes = [1000, 2000, 4000];
    let matrices: Vec<CondensedMatrix> = sizes.iter().map(|&n| gaussian_matrix(n)).collect();
    for (a, m) in [(Algorithm::Mst, Method::Single), (Algorithm::NnChain, Method::Average)] {
        let runs: Vec<(f64, sahn::LinkageStats)> = matrices.iter().map(|d0| timed(d0, a, m)).collect();
        for k in 1..runs.len() {
            let ratio = runs[k].1.scanned as f64 / runs[k - 1].1.scanned as f64;
            let secs = runs[k].0 / runs[k - 1].0;
            ensure((3.0..=6.0).contains(&ratio), || {
                format!("{}/{} work ratio {:.2} at n={}", a, m, ratio, sizes[k])
            })?;
            report.push(format!(
                "{}/{} n={} work x{:.2} time x{:.2}",
                a, m, sizes[k], ratio, secs
            ));
        }
    }
    let sizes = [500, 1000, 2000];
    let mut generic = Vec::new();
    let mut anderberg = Vec::new();
    for &n in &sizes {
        let d0 = gaussian_matrix(n);
        generic.push(timed(&d0, Algorithm::Generic, Method::Centroid));
        anderberg.push(timed(&d0, Algorithm::Anderberg, Method::Centroid));
    }
    let (g, a) = (generic[2].1.recalculations, anderberg[2].1.recalculations);
    ensure(a as f64 >= 2.0 * g as f64, || {
        format!("anderberg {} vs generic {} recalculations at n=2000", a, g)
    })?;
    report.push(format!(
        "centroid n=2000 recalculations anderberg {} generic {} (time {:.3}s vs {:.3}s)",
        a, g, anderberg[2].0, generic[2].0
    ));
    for k in 1..sizes.len() {
        let ratio = generic[k].1.recalculations as f64 / generic[k - 1].1.recalculations as f64;
        ensure(ratio < 6.0, || {
            format!("generic recalculations grew x{:.2} at n={}", ratio, sizes[k])
        })?;
        report.push(format!("generic n={} recalculations x{:.2}", sizes[k], ratio));
    }
    Ok(report.join("; "))
}

fn mst_memory() -> Outcome {
    let mut rng = fixtures::rng(7);
    let n = 2000;
    let d0 = random_real(n, &mut rng);
    let before: Vec<u64> = d0.values().iter().map(|v| v.to_bits()).collect();
    let (d, mst_bytes) = peak_extra(|| sahn::mst_linkage(&d0).unwrap());
    let after: Vec<u64> = d0.values().iter().map(|v| v.to_bits()).collect();
    ensure(before == after, || "input changed".into())?;
    ensure(validate(&d0, Method::Single, &d).is_valid(), || "invalid result".into())?;
    let matrix_bytes = d0.values().len() * 8;
    // Linear scratch: a few words per point.
    let budget = 256 * n;
    ensure(mst_bytes <= budget, || {
        format!("mst peaked at {} bytes, budget {}", mst_bytes, budget)
    })?;
    let (_, generic_bytes) = peak_extra(|| sahn::generic_linkage(&d0, Method::Single).unwrap());
    ensure(generic_bytes >= matrix_bytes, || {
        "allocation counter does not see the working copy".into()
    })?;
    let ds = gen_gaussian_mixture(n, 3, 5, None, 3).unwrap();
    let (_, vector_bytes) = peak_extra(|| mst_linkage_vectors(&ds, &Metric::Euclidean).unwrap());
    ensure(vector_bytes <= budget, || {
        format!("vector mst peaked at {} bytes", vector_bytes)
    })?;
    Ok(format!(
        "input unchanged; peak extra heap {} B (matrix {} B, generic {} B, vector mst {} B)",
        mst_bytes, matrix_bytes, generic_bytes, vector_bytes
    ))
}

fn reversing_sort(mut u: UnsortedDendrogram) -> UnsortedDendrogram {
    u.merges.reverse();
    u.merges.sort_by(|x, y| x.delta.total_cmp(&y.delta));
    u
}

fn stable_sort_guard() -> Outcome {
    let ties = [fixtures::dataset_a(), fixtures::dataset_b(), fixtures::dataset_c()];
    let breaks = |core: &dyn Fn(&CondensedMatrix) -> UnsortedDendrogram| {
        ties.iter()
            .any(|d0| !validate(d0, Method::Single, &label(&reversing_sort(core(d0))).unwrap()).is_valid())
    };
    let stable_ok = |core: &dyn Fn(&CondensedMatrix) -> UnsortedDendrogram| {
        ties.iter()
            .all(|d0| validate(d0, Method::Single, &finish(core(d0)).unwrap()).is_valid())
    };
    let nnchain = |d0: &CondensedMatrix| sahn::nn_chain_core(d0, Method::Single).unwrap();
    let mst = |d0: &CondensedMatrix| sahn::mst_linkage_core(d0, 0).unwrap();
    ensure(stable_ok(&nnchain) && stable_ok(&mst), || {
        "stable sort output invalid".into()
    })?;
    ensure(breaks(&nnchain), || "reversed ties never broke nnchain".into())?;
    ensure(breaks(&mst), || "reversed ties never broke mst".into())?;
    Ok("reversing equal keys breaks both nnchain and mst".into())
}

fn vector_differential() -> Outcome {
    let mut rng = fixtures::rng(9);
    for i in 0..200 {
        let n = rng.random_range(1..=30);
        let dim = [1, 2, 5][i % 3];
        let coarse = i % 4 == 0;
        let coords = (0..n * dim)
            .map(|_| {
                if coarse {
                    rng.random_range(0..3) as f64
                } else {
                    rng.random_range(-5.0..5.0)
                }
            })
            .collect();
        let ds = VectorDataset::new(dim, coords).unwrap();
        let d0 = pairwise_dissimilarity(&ds, &Metric::Euclidean).unwrap();
        let verdict = validate(
            &d0,
            Method::Single,
            &mst_linkage_vectors(&ds, &Metric::Euclidean).unwrap(),
        );
        ensure(verdict.is_valid(), || format!("mst on {:?}: {}", ds.coords(), verdict))?;
        for m in [Method::Ward, Method::Centroid, Method::Median] {
            let verdict = validate(&d0, m, &generic_linkage_variant(&ds, m).unwrap());
            ensure(verdict.is_valid(), || {
                format!("variant {} on {:?}: {}", m, ds.coords(), verdict)
            })?;
        }
    }
    Ok("200 datasets valid for mst and the ward/centroid/median variant".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle validity battery", oracle_battery),
        ("exhaustive tie cross-check", tie_cross_check),
        ("additive-update counterexample", additive_counterexample),
        ("inversion handling", inversions),
        ("update identities", identities),
        ("scaling shape", scaling),
        ("mst memory and immutability", mst_memory),
        ("stable-sort regression guard", stable_sort_guard),
        ("vector/matrix differential", vector_differential),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {}", msg))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {}: {}", i + 1, name, detail),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {}: {}", i + 1, name, detail);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
