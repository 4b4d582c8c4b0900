//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use qfs_core::approx::{is_locally_hypercompact, Approximation};
use qfs_core::omega::{catalogue_witnesses, stagewise_report, way_below_probe, StagePredicate};
use qfs_core::{
    FiniteSpace, PointSet, PowerSpace, Reading, StagedDirectedSet, StagedPoint, StagedSpace,
    Verdict,
};
use qfs_workbench::corpus::{enumerate_posets, DEFAULT_POSET_CAP};
use qfs_workbench::{run_suite, Corpus, SuiteReport};

const CORPUS_TIME_LIMIT: Duration = Duration::from_secs(5 * 60);
const POWER_BUILD_TIME_LIMIT: Duration = Duration::from_secs(10 * 60);
const MAX_UNKNOWN_RATE: f64 = 0.05;
const RANDOM_INSTANCES: usize = 500;
const RANDOM_SEED: u64 = 7;
const PROBE_DEPTH: u32 = 64;
const STAGE_DEPTH: u32 = 12;

type Checked = Result<String, String>;
type Criterion = (&'static str, fn() -> Checked);

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn spaces(max: usize) -> Vec<FiniteSpace> {
    Corpus::exhaustive(max, DEFAULT_POSET_CAP)
        .expect("corpus builds")
        .entries
        .into_iter()
        .map(|e| e.space)
        .collect()
}

fn up_of(s: &FiniteSpace, f: PointSet) -> PointSet {
    (0..s.len())
        .filter(|&y| f.iter().any(|x| s.le(x, y)))
        .collect()
}

fn clean(report: &SuiteReport) -> Result<(), String> {
    ensure(report.failed() == 0, || {
        let first = report
            .checks
            .iter()
            .find_map(|c| c.first_failure.as_ref())
            .map(|f| format!("{} on {}: {}", f.check, f.instance_name, f.detail))
            .unwrap_or_default();
        format!("{} failures, first {first}", report.failed())
    })
}

fn alexandroff_collapse() -> Checked {
    let start = Instant::now();
    let mut counts = Vec::new();
    for n in 1..=5 {
        let ours = enumerate_posets(n, DEFAULT_POSET_CAP).map_err(|e| e.to_string())?;
        let mut ours_canon: Vec<_> = ours
            .iter()
            .map(|o| common::canonical_of(&common::up_sets_of(o)))
            .collect();
        ours_canon.sort();
        let brute = common::posets(n);
        ensure(ours_canon == brute, || {
            format!(
                "n = {n}: {} classes against {} by brute force",
                ours.len(),
                brute.len()
            )
        })?;
        for o in &ours {
            let s = FiniteSpace::from_order(qfs_core::space::default_labels(n), o.clone())
                .map_err(|e| e.to_string())?;
            let expected: Vec<u64> = common::upper_sets(&common::up_sets_of(o));
            let mut got: Vec<u64> = s.directed_open_sets().iter().map(|u| u.bits()).collect();
            got.sort();
            ensure(got == expected, || {
                format!("directed opens differ on {o:?}")
            })?;
            ensure(s.is_directed_space(), || {
                format!("{o:?} is not a directed space")
            })?;
        }
        counts.push(ours.len());
    }
    let elapsed = start.elapsed();
    ensure(counts == [1, 2, 5, 16, 63], || format!("counts {counts:?}"))?;
    ensure(elapsed < CORPUS_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "counts {counts:?}, 87 classes, two enumerators agree, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn quasicontinuity_three_ways() -> Checked {
    let all = spaces(5);
    for s in &all {
        let a = Approximation::new(s).map_err(|e| e.to_string())?;
        let verdicts = [
            a.is_d_quasicontinuous(),
            is_locally_hypercompact(s),
            a.has_converging_subfamilies(),
        ];
        ensure(verdicts == [true; 3], || {
            format!("{:?} gives {verdicts:?}", s.specialization_order())
        })?;
    }
    Ok(format!("{} instances, 0 disagreements", all.len()))
}

fn uparrow_and_interpolation() -> Checked {
    let all = spaces(4);
    let mut interpolations = 0;
    for s in &all {
        let a = Approximation::new(s).map_err(|e| e.to_string())?;
        let way_below = |g: PointSet, h: PointSet| h.is_subset(up_of(s, g));
        for f in s.carrier().subsets().filter(|f| !f.is_empty()) {
            let up = up_of(s, f);
            let got = a.uparrow_d(f).map_err(|e| e.to_string())?;
            ensure(got == s.interior(up) && got == up, || {
                format!("uparrow of {f:?} is {got:?}, interior of the up-set is {up:?}")
            })?;
            for y in 0..s.len() {
                if !way_below(f, PointSet::singleton(y)) {
                    continue;
                }
                let mid = a
                    .interpolate(f, y)
                    .map_err(|e| e.to_string())?
                    .ok_or_else(|| format!("no interpolant for {f:?} and {y}"))?;
                ensure(
                    way_below(f, mid) && way_below(mid, PointSet::singleton(y)),
                    || format!("{mid:?} does not interpolate {f:?} and {y}"),
                )?;
                interpolations += 1;
            }
        }
    }
    Ok(format!(
        "{} instances, {interpolations} interpolations",
        all.len()
    ))
}

fn qfs_statements() -> Checked {
    let mut corpus = Corpus::exhaustive(4, DEFAULT_POSET_CAP).map_err(|e| e.to_string())?;
    corpus.extend(Corpus::random(RANDOM_INSTANCES, RANDOM_SEED, 6).map_err(|e| e.to_string())?);
    let report = run_suite(&corpus, "acceptance", "qfs", Default::default(), 1)
        .map_err(|e| e.to_string())?;
    clean(&report)?;
    let search = report
        .check("qfs/witness-search")
        .ok_or("no witness search")?;
    let rate = search.unknown as f64 / search.checked as f64;
    ensure(rate <= MAX_UNKNOWN_RATE, || {
        format!("unknown rate {rate:.3}")
    })?;
    Ok(format!(
        "{} instances, 0 failures, witness search unknown rate {:.1}%",
        corpus.len(),
        rate * 100.0
    ))
}

fn constructions() -> Checked {
    let corpus = Corpus::exhaustive(4, DEFAULT_POSET_CAP).map_err(|e| e.to_string())?;
    let report = run_suite(
        &corpus,
        "acceptance",
        "constructions",
        Default::default(),
        1,
    )
    .map_err(|e| e.to_string())?;
    clean(&report)?;
    Ok(format!(
        "{} checks over {} instances, 0 failures",
        report.checks.len(),
        corpus.len()
    ))
}

fn powerspace() -> Checked {
    let corpus = Corpus::exhaustive(4, DEFAULT_POSET_CAP).map_err(|e| e.to_string())?;
    let report = run_suite(&corpus, "acceptance", "powerspace", Default::default(), 1)
        .map_err(|e| e.to_string())?;
    clean(&report)?;
    let start = Instant::now();
    for s in spaces(4).iter().filter(|s| s.len() == 4) {
        PowerSpace::build(s, Reading::SomeLimit).map_err(|e| e.to_string())?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < POWER_BUILD_TIME_LIMIT, || {
        format!("n = 4 builds took {elapsed:?}")
    })?;
    Ok(format!(
        "{} instances, 0 failures, all n = 4 builds in {:.2}s",
        corpus.len(),
        elapsed.as_secs_f64()
    ))
}

fn omega_probe() -> Checked {
    use StagedPoint::{Nat, Top};
    let s = StagedSpace::omega_top();
    let w = catalogue_witnesses(&s);
    for depth in [1, PROBE_DEPTH] {
        let v = way_below_probe(&s, Top, Top, &w, depth).map_err(|e| e.to_string())?;
        let expected = Verdict::Refuted {
            witness: StagedDirectedSet::Chain { lag: 0 },
            depth,
        };
        ensure(v == expected, || {
            format!("top against top at {depth}: {v:?}")
        })?;
    }
    let v = way_below_probe(&s, Nat(3), Top, &w, PROBE_DEPTH).map_err(|e| e.to_string())?;
    ensure(v == Verdict::UnknownAtDepth(PROBE_DEPTH), || {
        format!("3 against top: {v:?}")
    })?;
    let trace = stagewise_report(&s, StagePredicate::WayBelow(Top, Top), STAGE_DEPTH)
        .map_err(|e| e.to_string())?;
    ensure(
        trace.values.len() as u32 == STAGE_DEPTH + 1 && trace.values.iter().all(|&(_, v)| v),
        || format!("stagewise {:?}", trace.values),
    )?;
    Ok(format!(
        "top refuted by chain(lag=0), 3 unknown at {PROBE_DEPTH}, top way below top on stages 0..={STAGE_DEPTH}"
    ))
}

fn determinism() -> Checked {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for jobs in [1, 4, 8] {
        let path = dir.path().join(format!("report-{jobs}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_qfs"))
            .args(["verify", "--suite", "all", "--max-size", "4", "--jobs"])
            .arg(jobs.to_string())
            .arg("--json")
            .arg(&path)
            .env_remove("QFS_CACHE_DIR")
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || {
            format!("verify with {jobs} workers exited with {}", status.status)
        })?;
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(outputs.windows(2).all(|w| w[0] == w[1]), || {
        "reports differ between worker counts".into()
    })?;
    Ok(format!(
        "identical {}-byte reports for 1, 4 and 8 workers",
        outputs[0].len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "directed opens are the up-sets on every poset up to 5 points",
            alexandroff_collapse,
        ),
        (
            "three quasicontinuity tests agree up to 5 points",
            quasicontinuity_three_ways,
        ),
        (
            "uparrow is the interior of the up-set; interpolation up to 4 points",
            uparrow_and_interpolation,
        ),
        (
            "witness consequences hold on posets and 500 random spaces",
            qfs_statements,
        ),
        ("constructions transport witnesses", constructions),
        ("upper powerspace checks up to 4 points", powerspace),
        (
            "omega probe: limit refutation against stagewise truth",
            omega_probe,
        ),
        (
            "verify reports are identical across worker counts",
            determinism,
        ),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
