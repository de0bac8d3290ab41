//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use evochess::arena::{
    bundled_openings, elo_estimate, mean_score, rating_difference, run_match, Tally,
    DEFAULT_MAX_PLIES,
};
use evochess::board::{random_position, Position};
use evochess::eval::{evaluate, evaluate_white, extract_features, EvalParams, Param, NUM_PARAMS};
use evochess::expert::{
    build_training_set, HiddenExpert, PositionSource, ScoredPosition, TrainingSet,
};
use evochess::ga::{evaluate_holdout, run_evolution, EvolutionOutcome, GaConfig};
use evochess::genome::{decode, encode, seeded_chromosome, CHROMOSOME_BITS};
use evochess::par::Pool;
use evochess::search::{alphabeta, minimax_oracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

// Published best-evolved parameter table, in listing order.
const EVOLVED_TABLE: [(&str, i32); NUM_PARAMS] = [
    ("PAWN_VALUE", 83),
    ("KNIGHT_VALUE", 322),
    ("BISHOP_VALUE", 323),
    ("ROOK_VALUE", 478),
    ("QUEEN_VALUE", 954),
    ("PAWN_ADVANCE_A", 2),
    ("PAWN_ADVANCE_B", 4),
    ("PASSED_PAWN_MULT", 5),
    ("DOUBLED_PAWN_PENALTY", 21),
    ("ISOLATED_PAWN_PENALTY", 10),
    ("BACKWARD_PAWN_PENALTY", 3),
    ("WEAK_SQUARE_PENALTY", 7),
    ("PASSED_PAWN_ENEMY_KING_DIST", 5),
    ("KNIGHT_SQ_MULT", 7),
    ("KNIGHT_OUTPOST_MULT", 8),
    ("BISHOP_MOBILITY", 5),
    ("BISHOP_PAIR", 44),
    ("ROOK_ATTACK_KING_FILE", 30),
    ("ROOK_ATTACK_KING_ADJ_FILE", 1),
    ("ROOK_ATTACK_KING_ADJ_FILE_ABGH", 21),
    ("ROOK_7TH_RANK", 32),
    ("ROOK_CONNECTED", 2),
    ("ROOK_MOBILITY", 2),
    ("ROOK_BEHIND_PASSED_PAWN", 48),
    ("ROOK_OPEN_FILE", 12),
    ("ROOK_SEMI_OPEN_FILE", 6),
    ("ROOK_ATCK_WEAK_PAWN_OPEN_COLUMN", 7),
    ("ROOK_COLUMN_MULT", 3),
    ("QUEEN_MOBILITY", 0),
    ("KING_NO_FRIENDLY_PAWN", 27),
    ("KING_NO_FRIENDLY_PAWN_ADJ", 17),
    ("KING_FRIENDLY_PAWN_ADVANCED1", 12),
    ("KING_NO_ENEMY_PAWN", 11),
    ("KING_NO_ENEMY_PAWN_ADJ", 3),
    ("KING_PRESSURE_MULT", 8),
];

fn table_params() -> EvalParams {
    let mut v = [0; NUM_PARAMS];
    for (name, value) in EVOLVED_TABLE {
        v[Param::from_name(name).unwrap().index()] = value;
    }
    EvalParams::new(v).unwrap()
}

/// Independent packer: 10-bit material fields, then 6-bit fields, MSB first.
fn pack_oracle() -> String {
    let mut s = String::new();
    for (i, (_, value)) in EVOLVED_TABLE.iter().enumerate() {
        let width = if i < 5 { 10 } else { 6 };
        s.push_str(&format!("{:0width$b}", value, width = width));
    }
    s
}

fn criterion_1() -> Verdict {
    let params = table_params();
    let c = encode(&params);
    let text = c.to_string();
    let oracle = pack_oracle();
    let pass = CHROMOSOME_BITS == 230
        && oracle.len() == 230
        && text == oracle
        && decode(&c) == params
        && params == EvalParams::reference();
    verdict(
        pass,
        format!(
            "{} bits, table round-trip {}",
            text.len(),
            decode(&c) == params
        ),
    )
}

fn oracle_rd(w: f64) -> f64 {
    -400.0 * (1.0 / w - 1.0).log10()
}

fn criterion_2() -> Verdict {
    // (points, games, published rounded RD)
    let rows: [(f64, f64, f64); 8] = [
        (297.0, 300.0, 798.0),
        (544.5, 1000.0, 31.0),
        (296.0, 300.0, 748.0),
        (173.5, 300.0, 55.0),
        (177.0, 300.0, 63.0),
        (135.0, 300.0, -35.0),
        (154.0, 300.0, 9.0),
        (172.5, 300.0, 52.0),
    ];
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    let mut pass = true;
    for (points, games, published) in rows {
        let w = points / games;
        let rd = rating_difference(w).unwrap();
        pass &= (rd - oracle_rd(w)).abs() < 1e-9;
        worst = worst.max((rd - published).abs());
        parts.push(format!("{:.2}%->{:+.1}", 100.0 * w, rd));
    }
    pass &= worst <= 1.0;
    verdict(
        pass,
        format!("max deviation {worst:.2} Elo; {}", parts.join(" ")),
    )
}

fn criterion_3() -> Verdict {
    let t = Tally::new(336, 417, 247);
    let n = 1000.0;
    let scores: Vec<f64> = std::iter::repeat_n(1.0, 336)
        .chain(std::iter::repeat_n(0.5, 417))
        .chain(std::iter::repeat_n(0.0, 247))
        .collect();
    let mean = scores.iter().sum::<f64>() / n;
    let var = scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
    let se = var.sqrt() / n.sqrt();
    let oracle_half = |k: f64| (oracle_rd(mean + k * se) - oracle_rd(mean - k * se)) / 2.0;

    let e2 = elo_estimate(&t, 2.0).unwrap();
    let e3 = elo_estimate(&t, 3.0).unwrap();
    let pass = (mean_score(&t).unwrap() - 0.5445).abs() < 1e-12
        && (se - 0.012).abs() < 0.001
        && e2.rd.round() == 31.0
        && (e2.half_width() - 17.0).abs() <= 2.0
        && (e3.half_width() - 26.0).abs() <= 3.0
        && (e2.half_width() - oracle_half(2.0)).abs() < 1e-9
        && (e3.half_width() - oracle_half(3.0)).abs() < 1e-9;
    verdict(
        pass,
        format!(
            "mean {:.4}, s/sqrt(N) {:.4}, RD {:+.1}, k=2 +/-{:.1}, k=3 +/-{:.1}",
            e2.mean,
            se,
            e2.rd,
            e2.half_width(),
            e3.half_width()
        ),
    )
}

fn quiet_training_set(scorer: &mut HiddenExpert, pool: &Pool) -> TrainingSet {
    let source = PositionSource::Random {
        seed: 11,
        min_plies: 4,
        max_plies: 80,
        quiet: true,
    };
    build_training_set(&source, scorer, 2000, 1, pool).unwrap()
}

fn desk_config(generations: usize) -> GaConfig {
    GaConfig {
        population_size: 100,
        generations,
        sample_size: 1000,
        resample_each_generation: true,
        seed: 1,
        ..GaConfig::default()
    }
}

fn criterion_4(pool: &Pool) -> (Verdict, EvolutionOutcome) {
    let ts = quiet_training_set(
        &mut HiddenExpert::static_eval(EvalParams::reference()),
        pool,
    );
    let out = run_evolution(&desk_config(150), &ts.train, pool).unwrap();
    let first = out.history[0].best_error;
    let train = out.best.error.unwrap();
    let holdout = evaluate_holdout(&out.best, &ts.test[..500]).unwrap();
    let pass =
        ts.train.len() == 1000 && train <= 0.2 * first && (holdout - train).abs() <= 0.25 * train;
    let v = verdict(
        pass,
        format!(
            "gen0 best {first:.1} cp -> final {train:.1} cp (ratio {:.3}); holdout {holdout:.1} cp",
            train / first
        ),
    );
    (v, out)
}

fn criterion_5(pool: &Pool) -> Verdict {
    let ts = quiet_training_set(&mut HiddenExpert::depth2(EvalParams::reference()), pool);
    let out = run_evolution(&desk_config(50), &ts.train, pool).unwrap();
    let first = out.history[0].best_error;
    let last = out.history.last().unwrap().best_error;
    let improvement = 1.0 - last / first;
    verdict(
        improvement >= 0.6,
        format!(
            "gen0 best {first:.1} cp -> gen50 best {last:.1} cp (improvement {:.1}%)",
            100.0 * improvement
        ),
    )
}

fn criterion_6(pool: &Pool) -> Verdict {
    let hidden = EvalParams::reference();
    let train: Vec<ScoredPosition> = (0..1000)
        .map(|s| {
            let p = random_position(s, 4, 80);
            ScoredPosition::new(p, evaluate(&p, &hidden), "static-hidden")
        })
        .collect();
    let mut violations = 0;
    for seed in 0..5 {
        let cfg = GaConfig {
            population_size: 50,
            generations: 100,
            sample_size: 200,
            resample_each_generation: false,
            seed,
            ..GaConfig::default()
        };
        let h = run_evolution(&cfg, &train, pool).unwrap().history;
        violations += h
            .windows(2)
            .filter(|w| w[1].best_error > w[0].best_error)
            .count();
    }
    verdict(
        violations == 0,
        format!("{violations} increases over 5 seeds x 100 generations"),
    )
}

fn criterion_7(evolved: &EvalParams, pool: &Pool) -> Verdict {
    let random = decode(&seeded_chromosome(1000));
    let openings = bundled_openings();
    let m = run_match(evolved, &random, &openings, 3, DEFAULT_MAX_PLIES, pool).unwrap();
    let share = mean_score(&m.tally).unwrap();
    verdict(
        m.tally.games() == 100 && share >= 0.8,
        format!(
            "+{} ={} -{} over {} games, {:.1}% points",
            m.tally.wins,
            m.tally.draws,
            m.tally.losses,
            m.tally.games(),
            100.0 * share
        ),
    )
}

fn criterion_8() -> Verdict {
    let p = Position::startpos();
    let counts: Vec<u64> = (1..=4).map(|d| p.perft(d)).collect();
    verdict(counts == [20, 400, 8902, 197281], format!("{counts:?}"))
}

fn criterion_9() -> Verdict {
    let mut mismatches = 0;
    for seed in 0..100 {
        let p = random_position(seed, 0, 100);
        let theta = decode(&seeded_chromosome(seed));
        for depth in 1..=3 {
            if alphabeta(&p, depth, &theta).score
                != minimax_oracle(&p, depth, &theta).unwrap().score
            {
                mismatches += 1;
            }
        }
    }
    verdict(
        mismatches == 0,
        format!("{mismatches} mismatches in 300 searches"),
    )
}

fn criterion_10() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut half = [0; NUM_PARAMS];
    let mut antisym = 0;
    let mut linear = 0;
    for seed in 0..1000 {
        let p = random_position(seed, 0, 120);
        let m = p.mirror();
        let mut a = [0; NUM_PARAMS];
        let mut b = [0; NUM_PARAMS];
        for q in Param::ALL {
            half[q.index()] = q.max_value() / 2;
            a[q.index()] = rng.gen_range(0..=half[q.index()]);
            b[q.index()] = rng.gen_range(0..=half[q.index()]);
        }
        let sum: Vec<i32> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let (a, b) = (EvalParams::new(a).unwrap(), EvalParams::new(b).unwrap());
        let sum = EvalParams::new(sum.try_into().unwrap()).unwrap();
        if extract_features(&m) != -extract_features(&p)
            || evaluate_white(&m, &a) != -evaluate_white(&p, &a)
        {
            antisym += 1;
        }
        if evaluate(&p, &sum) != evaluate(&p, &a) + evaluate(&p, &b) {
            linear += 1;
        }
    }
    verdict(
        antisym == 0 && linear == 0,
        format!("1000 positions: {antisym} antisymmetry and {linear} linearity failures"),
    )
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_evochess"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!(
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        ))
    }
}

fn evolve_csv(dir: &Path, scored: &str, threads: &str, name: &str) -> Result<Vec<u8>, String> {
    let out_dir = dir.join(name);
    run_cli(&[
        "--threads",
        threads,
        "evolve",
        "--train",
        scored,
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--population-size",
        "60",
        "--generations",
        "25",
        "--sample-size",
        "200",
        "--seed",
        "42",
    ])?;
    std::fs::read(out_dir.join("learning_curve.csv")).map_err(|e| e.to_string())
}

fn criterion_11() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let positions = dir.path().join("positions.epd");
    let scored = dir.path().join("scored.epd");
    let result = (|| {
        run_cli(&[
            "gen",
            "--seed",
            "3",
            "--count",
            "400",
            "--out",
            positions.to_str().unwrap(),
        ])?;
        run_cli(&[
            "score",
            "--input",
            positions.to_str().unwrap(),
            "--out",
            scored.to_str().unwrap(),
        ])?;
        let a = evolve_csv(dir.path(), scored.to_str().unwrap(), "1", "one")?;
        let b = evolve_csv(dir.path(), scored.to_str().unwrap(), "8", "eight")?;
        Ok::<_, String>((a, b))
    })();
    match result {
        Ok((a, b)) => verdict(
            a == b && !a.is_empty(),
            format!("{} vs {} bytes, identical: {}", a.len(), b.len(), a == b),
        ),
        Err(e) => verdict(false, e),
    }
}

fn main() -> ExitCode {
    let pool = Pool::default();
    let mut verdicts: Vec<(u32, Verdict)> = Vec::new();
    let mut report = |n: u32, start: Instant, v: Verdict| {
        println!(
            "criterion {n:>2}: {} ({:.1}s) {}",
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            v.detail
        );
        verdicts.push((n, v));
    };
    let t = Instant::now();
    report(1, t, criterion_1());
    let t = Instant::now();
    report(2, t, criterion_2());
    let t = Instant::now();
    report(3, t, criterion_3());
    let t = Instant::now();
    let (v4, run4) = criterion_4(&pool);
    report(4, t, v4);
    let t = Instant::now();
    report(5, t, criterion_5(&pool));
    let t = Instant::now();
    report(6, t, criterion_6(&pool));
    let t = Instant::now();
    report(7, t, criterion_7(&decode(&run4.best.chromosome), &pool));
    let t = Instant::now();
    report(8, t, criterion_8());
    let t = Instant::now();
    report(9, t, criterion_9());
    let t = Instant::now();
    report(10, t, criterion_10());
    let t = Instant::now();
    report(11, t, criterion_11());

    let failed: Vec<u32> = verdicts
        .iter()
        .filter(|(_, v)| !v.pass)
        .map(|(n, _)| *n)
        .collect();
    println!(
        "acceptance: {}/{} criteria passed",
        verdicts.len() - failed.len(),
        verdicts.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
