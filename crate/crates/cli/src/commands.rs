use std::fs;
use std::path::Path;
use std::time::Duration;

use evochess::arena::{
    bundled_openings, elo_estimate, match_report_csv, mean_score, parse_openings, parse_suite,
    run_match, run_testsuite, score_stddev, summary, Tally,
};
use evochess::epd::EpdRecord;
use evochess::eval::EvalParams;
use evochess::expert::{
    collect_positions, load_scored_epd, EpdFileExpert, HiddenExpert, PositionSource, Scorer,
    UciPool,
};
use evochess::ga::{evaluate_holdout, learning_curve_csv, Checkpoint, Evolution, GaConfig};
use evochess::genome::{decode, encode, seeded_chromosome, Chromosome};
use evochess::par::Pool;

use crate::error::CliError;
use crate::{Cli, Command, EvolveArgs, GenArgs, MatchArgs, RateArgs, ScoreArgs, SuiteArgs};

/// Offset added to `--seed` for the generator that drives evolution.
const EVOLVE_SEED_OFFSET: u64 = 1;

pub fn run(cli: Cli) -> Result<(), CliError> {
    let pool = Pool::new(cli.threads);
    match cli.command {
        Command::Gen(a) => gen(a, &pool),
        Command::Score(a) => score(a, &pool),
        Command::Evolve(a) => evolve(a, &pool),
        Command::Match(a) => play_match(a, &pool),
        Command::Rate(a) => rate(a),
        Command::Suite(a) => suite(a, &pool),
    }
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("{path}: {e}")))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// `reference`, `zero`, `random:<seed>` or a parameter file.
fn load_params(spec: &str) -> Result<EvalParams, CliError> {
    match spec {
        "reference" => Ok(EvalParams::reference()),
        "zero" => Ok(EvalParams::zero()),
        _ => {
            if let Some(seed) = spec.strip_prefix("random:") {
                let seed: u64 = seed
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad seed in {spec:?}")))?;
                return Ok(decode(&seeded_chromosome(seed)));
            }
            Ok(EvalParams::parse(&read(spec)?)
                .map_err(|e| CliError::Data(format!("{spec}: {e}")))?)
        }
    }
}

fn gen(a: GenArgs, pool: &Pool) -> Result<(), CliError> {
    if a.min_plies > a.max_plies {
        return Err(CliError::Usage("--min-plies exceeds --max-plies".into()));
    }
    let src = PositionSource::Random {
        seed: a.seed,
        min_plies: a.min_plies,
        max_plies: a.max_plies,
        quiet: a.quiet,
    };
    let positions = collect_positions(&src, a.count, pool)?;
    let mut out = String::new();
    for p in positions {
        out.push_str(&EpdRecord::new(p).to_line());
        out.push('\n');
    }
    write(Path::new(&a.out), &out)?;
    println!("wrote {} positions to {}", a.count, a.out);
    Ok(())
}

fn make_scorer(a: &ScoreArgs, pool: &Pool) -> Result<Box<dyn Scorer>, CliError> {
    let b = a.backend.as_str();
    if b == "static-hidden" || b == "depth2-hidden" {
        let params = load_params(&a.hidden_params)?;
        return Ok(Box::new(if b == "static-hidden" {
            HiddenExpert::static_eval(params)
        } else {
            HiddenExpert::depth2(params)
        }));
    }
    if let Some(path) = b.strip_prefix("epd-file:") {
        return Ok(Box::new(EpdFileExpert::load(Path::new(path))?));
    }
    if let Some(cmd) = b.strip_prefix("uci:") {
        if a.timeout_secs.is_nan() || a.timeout_secs <= 0.0 {
            return Err(CliError::Usage("--timeout-secs must be positive".into()));
        }
        let timeout = Duration::from_secs_f64(a.timeout_secs);
        let engines = UciPool::spawn(cmd, a.depth, timeout, pool.threads())
            .map_err(|e| CliError::Backend(e.to_string()))?;
        return Ok(Box::new(engines));
    }
    Err(CliError::Usage(format!(
        "unknown backend {b:?}; expected static-hidden, depth2-hidden, epd-file:<path> or uci:<command>"
    )))
}

fn score(a: ScoreArgs, pool: &Pool) -> Result<(), CliError> {
    let mut scorer = make_scorer(&a, pool)?;
    let text = read(&a.input)?;
    let mut records = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        records.push(EpdRecord::parse(t, i + 1)?);
        lines.push(i + 1);
    }
    let positions: Vec<_> = records.iter().map(|r| r.position).collect();
    let scores = match scorer.score_batch(&positions, pool) {
        Ok(s) => s,
        Err(_) => {
            // Rescore one at a time to name the failing line.
            let mut s = Vec::with_capacity(positions.len());
            for (p, line) in positions.iter().zip(&lines) {
                let v = scorer.score(p).map_err(|e| match CliError::from(e) {
                    CliError::Backend(m) => CliError::Backend(format!("line {line}: {m}")),
                    CliError::Data(m) => CliError::Data(format!("line {line}: {m}")),
                    other => other,
                })?;
                s.push(v);
            }
            s
        }
    };
    let mut out = String::new();
    for (r, s) in records.iter_mut().zip(scores) {
        let s = s.clamp(
            -evochess::expert::SCORE_LIMIT,
            evochess::expert::SCORE_LIMIT,
        );
        r.set("ce", vec![s.to_string()]);
        out.push_str(&r.to_line());
        out.push('\n');
    }
    write(Path::new(&a.out), &out)?;
    println!("scored {} positions with {}", records.len(), scorer.tag());
    Ok(())
}

fn evolve(a: EvolveArgs, pool: &Pool) -> Result<(), CliError> {
    let train = load_scored_epd(Path::new(&a.train))?;
    let test = a
        .test
        .as_deref()
        .map(|t| load_scored_epd(Path::new(t)))
        .transpose()?;
    let cfg = GaConfig {
        population_size: a.population_size,
        crossover_rate: a.crossover_rate,
        mutation_rate: a.mutation_rate,
        generations: a.generations,
        sample_size: a.sample_size,
        resample_each_generation: a.resample,
        seed: a.seed.wrapping_add(EVOLVE_SEED_OFFSET),
    };
    let out_dir = Path::new(&a.out_dir);
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Data(format!("{}: {e}", out_dir.display())))?;

    let mut evo = match &a.resume {
        Some(path) => {
            let ckpt = Checkpoint::parse(&read(path)?)?;
            Evolution::resume(cfg.clone(), &train, &ckpt, pool.clone())?
        }
        None => Evolution::new(cfg.clone(), &train, pool.clone())?,
    };
    let curve = out_dir.join("learning_curve.csv");
    let mut history = Vec::new();
    while evo.generation() < cfg.generations {
        let stats = evo.step()?;
        eprintln!(
            "generation {:>4}  best {:>9.3}  mean {:>9.3}",
            stats.generation, stats.best_error, stats.mean_error
        );
        history.push(stats);
        if a.checkpoint_every > 0 && evo.generation() % a.checkpoint_every == 0 {
            let name = format!("checkpoint-{:05}.txt", evo.generation());
            write(&out_dir.join(name), &evo.checkpoint().to_text())?;
            write(&curve, &learning_curve_csv(&history))?;
        }
    }
    history.push(evo.assess_current());
    write(&curve, &learning_curve_csv(&history))?;

    let leaders: Vec<Chromosome> = history.iter().map(|s| s.best).collect();
    let best = evo.best_of(&leaders);
    let params = decode(&best.chromosome);
    write(&out_dir.join("best.params"), &params.to_string())?;
    write(
        &out_dir.join("best.chromosome"),
        &format!("{}\n", encode(&params)),
    )?;
    println!(
        "best train error {:.3} (generation 0 best {:.3})",
        best.error.unwrap_or(f64::NAN),
        history[0].best_error
    );
    if let Some(test) = test {
        println!(
            "holdout error {:.3} on {} positions",
            evaluate_holdout(&best, &test)?,
            test.len()
        );
    }
    Ok(())
}

fn play_match(a: MatchArgs, pool: &Pool) -> Result<(), CliError> {
    let pa = load_params(&a.params_a)?;
    let pb = load_params(&a.params_b)?;
    let openings = match &a.openings {
        Some(path) => parse_openings(&read(path)?)?,
        None => bundled_openings(),
    };
    let m = run_match(&pa, &pb, &openings, a.depth, a.max_plies, pool)?;
    if let Some(path) = &a.report {
        write(Path::new(path), &match_report_csv(&m))?;
    }
    print!("{}", summary(&m.tally));
    Ok(())
}

fn rate(a: RateArgs) -> Result<(), CliError> {
    if a.k.is_nan() || a.k < 0.0 {
        return Err(CliError::Usage("--k must be non-negative".into()));
    }
    let t = Tally::new(a.wins, a.draws, a.losses);
    let e = elo_estimate(&t, a.k)?;
    println!("games {}  points {:.1}", t.games(), t.points());
    println!("mean score {:.4}", mean_score(&t)?);
    println!("stddev {:.4}", score_stddev(&t)?);
    println!(
        "RD {:+.1} +/- {:.1} (k={}, [{:+.1}, {:+.1}])",
        e.rd,
        e.half_width(),
        a.k,
        e.rd_lo,
        e.rd_hi
    );
    Ok(())
}

fn suite(a: SuiteArgs, pool: &Pool) -> Result<(), CliError> {
    let params = load_params(&a.params)?;
    let entries = parse_suite(&read(&a.suite)?)?;
    let out = run_testsuite(&entries, &params, a.depth, pool);
    for r in &out.results {
        let chosen = r.chosen.map(|m| m.uci()).unwrap_or_else(|| "-".into());
        println!(
            "{}\t{}\t{}",
            r.id,
            chosen,
            if r.solved { "ok" } else { "miss" }
        );
    }
    println!("solved {}/{}", out.solved, out.total);
    Ok(())
}
