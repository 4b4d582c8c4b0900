use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qfs_core::construct::{
    closed_subspace_qfs, point_plus_upset_retract, product_qfs, projection_image_qfs,
    retract_transport_qfs,
};
use qfs_core::maps::RetractPair;
use qfs_core::omega::{
    catalogue_witnesses, certify_at_stage, stagewise_report, way_below_probe, StagePredicate,
};
use qfs_core::qfs::{
    check_quasi_approximate_identity, fs_to_qfs, search_qfs_witness, SEARCH_BUDGET,
};
use qfs_core::space::DEFAULT_MAX_CARRIER;
use qfs_core::{
    FiniteSpace, MapFamily, PointMap, PointSet, Reading, Search, StagedPoint, StagedSpace,
};
use qfs_workbench::analyze::{analyze, powerspace_summary};
use qfs_workbench::config::Config;
use qfs_workbench::corpus::{random_space, Corpus, CACHE_ENV, DEFAULT_POSET_CAP};
use qfs_workbench::export::to_dot;
use qfs_workbench::suite::{replay, run_suite, Failure, Outcome, Settings, SuiteReport};
use qfs_workbench::Instance;

#[derive(Parser)]
#[command(
    name = "qfs",
    version,
    about = "Finite T0 spaces, way-below and quasi-finitely separating maps"
)]
struct Cli {
    /// TOML file with defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Largest carrier accepted from an instance file.
    #[arg(long, global = true)]
    max_carrier: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a space: order, opens, continuity notions, witnesses.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check a family or search for a quasi-approximate identity.
    Qfs {
        #[command(subcommand)]
        action: QfsAction,
    },
    /// Build a derived space and transport a witness to it.
    Construct {
        #[arg(long, value_enum)]
        op: Op,
        file: PathBuf,
        /// Family to transport (default: the witness found by search).
        #[arg(long)]
        family: Option<String>,
        /// Closed subset for `subspace`, comma separated labels.
        #[arg(long)]
        set: Option<String>,
        /// Projection for `image`, or the retraction `f` for `retract`.
        #[arg(long)]
        map: Option<String>,
        /// Section `g` for `retract`.
        #[arg(long)]
        section: Option<String>,
        /// Second space for `retract` and `tensor`.
        #[arg(long)]
        other: Option<PathBuf>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long, value_enum)]
        reading: Option<ReadingArg>,
    },
    /// Build the upper powerspace and compare it with the upper Vietoris topology.
    Powerspace {
        file: PathBuf,
        #[arg(long, value_enum)]
        reading: Option<ReadingArg>,
        #[arg(long)]
        json: bool,
    },
    /// Probe a way-below claim on a staged infinite space.
    Probe {
        /// `omega-top` or `flat-nat`.
        #[arg(long)]
        space: Option<String>,
        /// Instance file with a `staged` rule, instead of `--space`.
        #[arg(long)]
        instance: Option<PathBuf>,
        /// `"waybelow X Y"`, or a stage predicate: d-continuous, d-quasicontinuous,
        /// locally-hypercompact, qfs.
        #[arg(long)]
        claim: String,
        #[arg(long)]
        depth: Option<u32>,
        /// Also evaluate the claim on stages `0..=N`.
        #[arg(long)]
        stage_depth: Option<u32>,
    },
    /// Write instances: every poset up to isomorphism, or one random space.
    Generate {
        #[arg(long, conflicts_with = "random")]
        exhaustive: Option<usize>,
        /// SEED N DENSITY
        #[arg(long, num_args = 3, value_names = ["SEED", "N", "DENSITY"])]
        random: Option<Vec<String>>,
        /// Directory for one file per instance (default: one JSON per line on stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run theorem suites over the exhaustive corpus.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Extra seeded random instances.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        random_max_size: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
        /// Write the JSON summary here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Re-run the failures recorded in a report or failure file.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Export the specialization order.
    Export {
        #[arg(long)]
        dot: PathBuf,
    },
}

#[derive(Subcommand)]
enum QfsAction {
    /// Check every family in the file (or the identity if there is none).
    Check {
        file: PathBuf,
        #[arg(long)]
        family: Option<String>,
    },
    /// Search for a witness and print the instance with it attached.
    Witness {
        file: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Subspace,
    Image,
    Retract,
    PointUpset,
    Tensor,
    Powerspace,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReadingArg {
    Some,
    Every,
}

fn reading_of(flag: Option<ReadingArg>, config: &Config) -> Result<Reading> {
    match flag {
        Some(ReadingArg::Some) => Ok(Reading::SomeLimit),
        Some(ReadingArg::Every) => Ok(Reading::EveryLimit),
        None => match config.reading.as_deref() {
            None | Some("some") => Ok(Reading::SomeLimit),
            Some("every") => Ok(Reading::EveryLimit),
            Some(other) => bail!("unknown reading {other:?}; use some or every"),
        },
    }
}

struct Env {
    config: Config,
    cap: usize,
}

impl Env {
    fn load(&self, file: &Path) -> Result<(Instance, FiniteSpace)> {
        let inst = Instance::load(file)?;
        let space = inst
            .space(self.cap)
            .with_context(|| format!("in {}", file.display()))?;
        Ok((inst, space))
    }

    fn budget(&self, flag: Option<u64>) -> u64 {
        flag.or(self.config.budget).unwrap_or(SEARCH_BUDGET)
    }

    fn family(
        &self,
        inst: &Instance,
        space: &FiniteSpace,
        name: Option<&str>,
    ) -> Result<MapFamily> {
        match name {
            Some(n) => Ok(inst.family(n, space)?),
            None => match search_qfs_witness(space, self.budget(None))? {
                Search::Found(w) => Ok(w),
                Search::Absent => bail!("{} has no quasi-approximate identity", inst.name),
                Search::Unknown { explored } => {
                    bail!("witness search gave up after {explored} candidates")
                }
            },
        }
    }
}

fn parse_set(space: &FiniteSpace, text: &str) -> Result<PointSet> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|l| Ok(space.index_of(l)?))
        .collect()
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(dir) = &config.cache_dir {
        if std::env::var_os(CACHE_ENV).is_none() {
            // before any worker thread exists
            std::env::set_var(CACHE_ENV, dir);
        }
    }
    let cap = cli
        .max_carrier
        .or(config.max_carrier)
        .unwrap_or(DEFAULT_MAX_CARRIER);
    let env = Env { config, cap };
    match cli.command {
        Command::Analyze { file, json } => {
            let (inst, space) = env.load(&file)?;
            let a = analyze(&inst.name, &space, env.budget(None))?;
            if json || env.config.json == Some(true) {
                println!("{}", serde_json::to_string_pretty(&a)?);
            } else {
                print!("{}", a.render_text());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Qfs { action } => qfs_command(&env, action),
        Command::Construct {
            op,
            file,
            family,
            set,
            map,
            section,
            other,
            a,
            b,
            reading,
        } => {
            let (inst, space) = env.load(&file)?;
            let fam = env.family(&inst, &space, family.as_deref())?;
            let out =
                match op {
                    Op::Subspace => {
                        let set = parse_set(&space, set.as_deref().context("--set is required")?)?;
                        let (view, t) = closed_subspace_qfs(&space, set, &fam)?;
                        Instance::from_space(&format!("{}-subspace", inst.name), view.space())
                            .with_family("transported", view.space(), &t)
                    }
                    Op::Image => {
                        let f = inst.map(map.as_deref().context("--map is required")?, &space)?;
                        let (view, t) = projection_image_qfs(&space, &f, &fam)?;
                        Instance::from_space(&format!("{}-image", inst.name), view.space())
                            .with_family("transported", view.space(), &t)
                    }
                    Op::Retract => {
                        let other = other.context("--other is required")?;
                        let (yinst, y) = env.load(&other)?;
                        let f_name = map.as_deref().context("--map names the retraction f")?;
                        let g_name = section
                            .as_deref()
                            .context("--section names the section g")?;
                        let f_labels = inst
                            .maps
                            .get(f_name)
                            .with_context(|| format!("no map {f_name:?} in {}", inst.name))?;
                        let g_labels = yinst
                            .maps
                            .get(g_name)
                            .with_context(|| format!("no map {g_name:?} in {}", yinst.name))?;
                        let f = PointMap::between(
                            f_labels
                                .iter()
                                .map(|l| y.index_of(l))
                                .collect::<Result<_, _>>()?,
                            &space,
                            &y,
                        )?;
                        let g = PointMap::between(
                            g_labels
                                .iter()
                                .map(|l| space.index_of(l))
                                .collect::<Result<_, _>>()?,
                            &y,
                            &space,
                        )?;
                        let t = retract_transport_qfs(&space, &y, &RetractPair { f, g }, &fam)?;
                        Instance::from_space(&yinst.name, &y).with_family("transported", &y, &t)
                    }
                    Op::PointUpset => {
                        let a = space.index_of(a.as_deref().context("--a is required")?)?;
                        let b = space.index_of(b.as_deref().context("--b is required")?)?;
                        let r = point_plus_upset_retract(&space, a, b, &fam)?;
                        Instance::from_space(&format!("{}-retract", inst.name), r.view.space())
                            .with_family("transported", r.view.space(), &r.family)
                    }
                    Op::Tensor => {
                        let other = other.context("--other is required")?;
                        let (yinst, y) = env.load(&other)?;
                        let fy = env.family(&yinst, &y, None)?;
                        let (p, t) = product_qfs(&space, &y, &fam, &fy)?;
                        Instance::from_space(&format!("{}-x-{}", inst.name, yinst.name), p.space())
                            .with_family("transported", p.space(), &t)
                    }
                    Op::Powerspace => {
                        let reading = reading_of(reading, &env.config)?;
                        let (p, _) = powerspace_summary(&space, &fam, reading)?;
                        let maps = p.fs_witness(&fam)?;
                        Instance::from_space(&format!("{}-powerspace", inst.name), p.space())
                            .with_family("transported", p.space(), &fs_to_qfs(&maps))
                    }
                };
            println!("{}", out.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Powerspace {
            file,
            reading,
            json,
        } => {
            let (inst, space) = env.load(&file)?;
            let fam = env.family(&inst, &space, None)?;
            let (_, summary) = powerspace_summary(&space, &fam, reading_of(reading, &env.config)?)?;
            if json || env.config.json == Some(true) {
                println!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                print!("{}", summary.render_text());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Probe {
            space,
            instance,
            claim,
            depth,
            stage_depth,
        } => probe_command(&env, space, instance, &claim, depth, stage_depth),
        Command::Generate {
            exhaustive,
            random,
            out,
        } => {
            let corpus = match (exhaustive, random) {
                (Some(n), None) => {
                    let cap = env.config.poset_cap.unwrap_or(DEFAULT_POSET_CAP);
                    Corpus::exhaustive(n, cap)?
                }
                (None, Some(args)) => {
                    let seed: u64 = args[0].parse().context("SEED")?;
                    let n: usize = args[1].parse().context("N")?;
                    let d: f64 = args[2].parse().context("DENSITY")?;
                    if n > env.cap {
                        bail!("{n} points is above the carrier cap of {}", env.cap);
                    }
                    Corpus {
                        entries: vec![qfs_workbench::Entry {
                            provenance: qfs_workbench::Provenance::Random {
                                seed,
                                n,
                                density: d,
                            },
                            space: random_space(seed, n, d)?,
                        }],
                    }
                }
                _ => bail!("give --exhaustive N or --random SEED N DENSITY"),
            };
            for e in &corpus.entries {
                let inst = Instance::from_space(&e.name(), &e.space);
                match &out {
                    Some(dir) => {
                        std::fs::create_dir_all(dir)?;
                        std::fs::write(dir.join(format!("{}.json", e.name())), inst.to_json())?;
                    }
                    None => println!("{}", serde_json::to_string(&inst)?),
                }
            }
            if out.is_some() {
                eprintln!("wrote {} instances", corpus.len());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            max_size,
            jobs,
            random,
            seed,
            random_max_size,
            budget,
            json,
            replay: replay_file,
        } => {
            let c = &env.config;
            let settings = Settings {
                budget: env.budget(budget),
                extra_families: c
                    .extra_families
                    .unwrap_or(Settings::default().extra_families),
                factor_max: c.factor_max.unwrap_or(Settings::default().factor_max),
                power_max: c.power_max.unwrap_or(Settings::default().power_max),
                universe_max: c.universe_max.unwrap_or(Settings::default().universe_max),
            };
            if let Some(file) = replay_file {
                return replay_command(&file, settings, env.cap);
            }
            let suite = suite
                .or_else(|| c.suite.clone())
                .unwrap_or_else(|| "all".into());
            let max_size = max_size.or(c.max_size).unwrap_or(4);
            let jobs = jobs
                .or(c.jobs)
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let random = random.or(c.random).unwrap_or(0);
            let seed = seed.or(c.seed).unwrap_or(0);
            let random_max = random_max_size.or(c.random_max_size).unwrap_or(6);
            let cap = c.poset_cap.unwrap_or(DEFAULT_POSET_CAP);
            let mut corpus = Corpus::exhaustive(max_size, cap)?;
            let mut description = format!("posets with at most {max_size} points");
            if random > 0 {
                corpus.extend(Corpus::random(random, seed, random_max)?);
                description += &format!(
                    ", {random} random spaces with at most {random_max} points from seed {seed}"
                );
            }
            let report = run_suite(&corpus, &description, &suite, settings, jobs)?;
            print!("{}", report.render_text());
            if let Some(path) =
                json.or_else(|| c.json.filter(|&j| j).map(|_| PathBuf::from("report.json")))
            {
                std::fs::write(&path, report.to_json())?;
            }
            Ok(if report.failed() == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Export { dot } => {
            let (inst, space) = env.load(&dot)?;
            print!("{}", to_dot(&inst.name, &space));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn qfs_command(env: &Env, action: QfsAction) -> Result<ExitCode> {
    match action {
        QfsAction::Check { file, family } => {
            let (inst, space) = env.load(&file)?;
            let names: Vec<String> = match family {
                Some(f) => vec![f],
                None => inst.families.keys().cloned().collect(),
            };
            let mut all_pass = true;
            let targets: Vec<(String, MapFamily)> = if names.is_empty() {
                vec![("identity".into(), MapFamily::identity(space.len()))]
            } else {
                names
                    .iter()
                    .map(|n| Ok((n.clone(), inst.family(n, &space)?)))
                    .collect::<Result<_>>()?
            };
            for (name, fam) in targets {
                let r = check_quasi_approximate_identity(&space, &fam);
                all_pass &= r.passed();
                if r.passed() {
                    println!("{name}: quasi-approximate identity ({} members)", fam.len());
                } else {
                    println!("{name}: fails");
                    for (i, v) in &r.member_failures {
                        println!("  member {i}: {v:?}");
                    }
                    if !r.directed {
                        println!("  family is not directed");
                    }
                    if let Some(x) = r.nonconvergent_point {
                        println!("  values at {} do not converge to it", space.label(x));
                    }
                }
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        QfsAction::Witness { file, budget } => {
            let (inst, space) = env.load(&file)?;
            match search_qfs_witness(&space, env.budget(budget))? {
                Search::Found(w) => {
                    println!("{}", inst.with_family("witness", &space, &w).to_json());
                    Ok(ExitCode::SUCCESS)
                }
                Search::Absent => {
                    println!("no witness exists");
                    Ok(ExitCode::from(1))
                }
                Search::Unknown { explored } => {
                    println!("unknown: budget spent after {explored} candidates");
                    Ok(ExitCode::from(3))
                }
            }
        }
    }
}

fn probe_command(
    env: &Env,
    space: Option<String>,
    instance: Option<PathBuf>,
    claim: &str,
    depth: Option<u32>,
    stage_depth: Option<u32>,
) -> Result<ExitCode> {
    let staged = match (space, instance) {
        (Some(name), None) => StagedSpace::by_name(&name)
            .with_context(|| format!("no staged space named {name:?}"))?,
        (None, Some(file)) => Instance::load(&file)?
            .staged()?
            .context("instance has no staged rule")?,
        _ => bail!("give exactly one of --space or --instance"),
    };
    let depth = depth.or(env.config.depth).unwrap_or(64);
    let words: Vec<&str> = claim.split_whitespace().collect();
    let predicate = match words.as_slice() {
        ["waybelow", x, y] => {
            StagePredicate::WayBelow(x.parse::<StagedPoint>()?, y.parse::<StagedPoint>()?)
        }
        ["d-continuous"] => StagePredicate::DContinuous,
        ["d-quasicontinuous"] => StagePredicate::DQuasicontinuous,
        ["locally-hypercompact"] => StagePredicate::LocallyHypercompact,
        ["qfs"] => StagePredicate::Qfs,
        _ => bail!("unrecognized claim {claim:?}"),
    };
    if let StagePredicate::WayBelow(x, y) = predicate {
        let verdict = way_below_probe(&staged, x, y, &catalogue_witnesses(&staged), depth)?;
        println!("{} {x} << {y} at depth {depth}: {verdict:?}", staged.name());
        if let Some(k) = staged
            .stable_from(x)
            .into_iter()
            .chain(staged.stable_from(y))
            .max()
        {
            if let Some(v) = certify_at_stage(&staged, x, y, k)? {
                println!("  stage {k} alone: {v:?}");
            }
        }
    }
    let stage_depth = stage_depth.or(env.config.stage_depth);
    if let Some(k) = stage_depth {
        let trace = stagewise_report(&staged, predicate, k)?;
        let values: Vec<String> = trace
            .values
            .iter()
            .map(|(s, v)| format!("{s}:{v}"))
            .collect();
        println!("stages {}", values.join(" "));
        match trace.stable_from {
            Some(s) => println!("  constant from stage {s}"),
            None => println!("  no stage evaluated"),
        }
    } else if !matches!(predicate, StagePredicate::WayBelow(..)) {
        bail!("stage predicates need --stage-depth");
    }
    Ok(ExitCode::SUCCESS)
}

fn replay_command(file: &Path, settings: Settings, cap: usize) -> Result<ExitCode> {
    let text = std::fs::read_to_string(file)?;
    let failures: Vec<Failure> = match serde_json::from_str::<SuiteReport>(&text) {
        Ok(r) => r
            .checks
            .into_iter()
            .filter_map(|c| c.first_failure)
            .collect(),
        Err(_) => {
            vec![serde_json::from_str::<Failure>(&text).context("neither a report nor a failure")?]
        }
    };
    let mut reproduced = 0;
    for f in &failures {
        let outcome = replay(f, settings.clone(), cap)?;
        let again = matches!(outcome, Outcome::Fail(_));
        reproduced += usize::from(again);
        println!(
            "{} on {}: {}",
            f.check,
            f.instance_name,
            if again { "fails again" } else { "now passes" }
        );
    }
    if failures.is_empty() {
        println!("no failures recorded");
    }
    Ok(if reproduced == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
