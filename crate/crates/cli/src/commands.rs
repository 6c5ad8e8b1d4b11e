use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use cover_lrc::block_codes::{lrc_singleton_bound, TamoBarg};
use cover_lrc::counting::{
    format_decimal, Construction, Counter, Mode, PatternParams, Probability,
};
use cover_lrc::cover_lrc::{cover_lrc_bound, CoverLrc, LocalRepair};
use cover_lrc::cover_metric::{ArrayWord, LineSet};
use cover_lrc::simulate::{
    fill_lines, sample_pattern, simulate as run_simulation, SimulationConfig,
};
use cover_lrc::verify::standard_suite;
use cover_lrc::Elem;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::config::{invalid, CodeParams, ConstructionArg, ExperimentConfig, Format};

fn output(cfg: &ExperimentConfig) -> anyhow::Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn build_code(cfg: &ExperimentConfig, p: &CodeParams) -> anyhow::Result<CoverLrc> {
    let kprime = p
        .kprime
        .ok_or_else(|| invalid("one of --k or --kprime is required"))?;
    let field = cfg.field_for(p)?;
    CoverLrc::tamo_barg(&field, p.n, kprime, p.r, p.rho).map_err(|e| invalid(e.to_string()))
}

fn pattern_params(p: &CodeParams, mode: Mode) -> anyhow::Result<PatternParams> {
    PatternParams::new(p.n, p.n_l(), p.rho, mode).map_err(|e| invalid(e.to_string()))
}

#[derive(Serialize)]
struct BoundRow {
    n: usize,
    k: usize,
    kprime: usize,
    r: usize,
    rho: usize,
    lrc_bound: i64,
    cover_bound: i64,
    q: Option<u32>,
    distance: Option<usize>,
    optimal: Option<bool>,
}

pub fn bound(cfg: &ExperimentConfig) -> anyhow::Result<ExitCode> {
    let p = cfg.code_params(true)?;
    let kprime = p.kprime.expect("required above");
    let lrc_bound =
        lrc_singleton_bound(p.n, kprime, p.r, p.rho).map_err(|e| invalid(e.to_string()))?;
    let cover_bound =
        cover_lrc_bound(p.n, p.n * kprime, p.r, p.rho).map_err(|e| invalid(e.to_string()))?;
    let built = cfg
        .field_for(&p)
        .and_then(|f| TamoBarg::new(&f, p.n, kprime, p.r, p.rho).map_err(Into::into));
    let (q, distance) = match built {
        Ok(tb) => (
            Some(tb.code().field().order()),
            Some(tb.designed_distance()),
        ),
        Err(e) => {
            eprintln!("no Tamo-Barg instance: {e}");
            (None, None)
        }
    };
    let row = BoundRow {
        n: p.n,
        k: p.n * kprime,
        kprime,
        r: p.r,
        rho: p.rho,
        lrc_bound,
        cover_bound,
        q,
        distance,
        optimal: distance.map(|d| d as i64 == cover_bound),
    };
    let mut out = output(cfg)?;
    match cfg.format(Format::Csv) {
        Format::Json => write_json(&mut out, &row)?,
        Format::Csv => {
            let opt = |v: Option<String>| v.unwrap_or_default();
            writeln!(
                out,
                "n,k,kprime,r,rho,lrc_bound,cover_bound,q,distance,optimal"
            )?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                row.n,
                row.k,
                row.kprime,
                row.r,
                row.rho,
                row.lrc_bound,
                row.cover_bound,
                opt(row.q.map(|v| v.to_string())),
                opt(row.distance.map(|v| v.to_string())),
                opt(row.optimal.map(|v| v.to_string())),
            )?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn grid(rows: &[Vec<Elem>]) -> Vec<Vec<u32>> {
    rows.iter()
        .map(|r| r.iter().map(|e| e.0).collect())
        .collect()
}

pub fn roundtrip(
    cfg: &ExperimentConfig,
    rows: &[usize],
    cols: &[usize],
    random_lines: Option<usize>,
) -> anyhow::Result<ExitCode> {
    if cfg.format(Format::Json) != Format::Json {
        return Err(invalid("roundtrip only writes JSON"));
    }
    let p = cfg.code_params(true)?;
    let mode: Mode = cfg.mode.map(Into::into).unwrap_or(Mode::Erasures);
    let started = Instant::now();
    let code = build_code(cfg, &p)?;
    let built = started.elapsed();
    let n = p.n;
    let f = code.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed()?);

    if let Some(&bad) = rows.iter().chain(cols).find(|&&i| i == 0 || i > n) {
        return Err(invalid(format!("line index {bad} outside 1..={n}")));
    }
    let kp = code.constituent().dimension();
    let message: Vec<Vec<Elem>> = (0..kp)
        .map(|_| (0..n).map(|_| f.random(&mut rng)).collect())
        .collect();
    let lines = match random_lines {
        Some(t) if t > 2 * n => {
            return Err(invalid(format!("cannot corrupt {t} of {} lines", 2 * n)))
        }
        Some(t) => sample_pattern(&mut rng, n, t),
        None => LineSet::new(rows.iter().copied().chain(cols.iter().map(|c| c + n))),
    };

    let t0 = Instant::now();
    let codeword = code.encode(&message)?;
    let encoded = t0.elapsed();

    let (received, local, global) = match mode {
        Mode::Erasures => {
            let mut received = codeword.clone();
            for r in lines.rows(n) {
                (0..n).for_each(|c| received.set(r, c, Elem::ZERO));
            }
            for c in lines.cols(n) {
                (0..n).for_each(|r| received.set(r, c, Elem::ZERO));
            }
            let t1 = Instant::now();
            let local = code.local_erasure_repair(&received, &lines)?;
            let local_time = t1.elapsed();
            let t2 = Instant::now();
            let global = code.global_erasure_decode(&received, &lines);
            eprintln!(
                "local repair {local_time:?}, global decode {:?}",
                t2.elapsed()
            );
            (received, Some(local), global)
        }
        Mode::Errors => {
            let e = fill_lines(&f, n, &lines, &mut rng);
            let received = codeword.add(&e)?;
            let t2 = Instant::now();
            let global = code.global_error_decode(&received);
            eprintln!("global decode {:?}", t2.elapsed());
            (received, None, global)
        }
    };
    eprintln!("construction {built:?}, encode {encoded:?}");

    let local_json = local.as_ref().map(|l| match l {
        LocalRepair::Repaired(w) => {
            json!({"success": true, "correct": w == &codeword, "failed_blocks": []})
        }
        LocalRepair::Failed { failed_blocks, .. } => {
            json!({"success": false, "correct": false, "failed_blocks": failed_blocks})
        }
    });
    let global_json = match &global {
        Ok(w) => json!({"success": true, "correct": w == &codeword}),
        Err(e) => json!({"success": false, "error": e.to_string()}),
    };
    let repaired: Option<&ArrayWord> = local
        .as_ref()
        .and_then(LocalRepair::repaired)
        .or(global.as_ref().ok());
    let report = json!({
        "params": code.params(),
        "mode": mode.as_str(),
        "seed": cfg.seed()?,
        "message": grid(&message),
        "codeword": codeword.to_grid(),
        "erased_lines": lines.lines(),
        "received": received.to_grid(),
        "local_repair": local_json,
        "global_decode": global_json,
        "repaired": repaired.map(ArrayWord::to_grid),
        "recovered": repaired == Some(&codeword),
    });
    let mut out = output(cfg)?;
    write_json(&mut out, &report)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn selected_modes(cfg: &ExperimentConfig) -> Vec<Mode> {
    match cfg.mode {
        Some(m) => vec![m.into()],
        None => vec![Mode::Errors, Mode::Erasures],
    }
}

fn fraction(p: &Probability) -> String {
    format!("{}/{}", p.numer(), p.denom())
}

pub fn plocal(cfg: &ExperimentConfig) -> anyhow::Result<ExitCode> {
    let p = cfg.code_params(false)?;
    let (lo, hi) = cfg.t_range(p.n, (0, 2 * p.n))?;
    let which = cfg.construction.unwrap_or(ConstructionArg::Both);
    let distance = match p.kprime {
        Some(kp) => {
            let d =
                cover_lrc_bound(p.n, p.n * kp, p.r, p.rho).map_err(|e| invalid(e.to_string()))?;
            (d >= 1).then_some(d as usize)
        }
        None => None,
    };
    let marker = |mode: Mode| {
        distance.map(|d| match mode {
            Mode::Errors => (d - 1) / 2,
            Mode::Erasures => d - 1,
        })
    };
    let mut counter = Counter::new(p.n_l());
    let mut rows = Vec::new();
    for mode in selected_modes(cfg) {
        let params = pattern_params(&p, mode)?;
        for t in lo..=hi {
            let mut value = |c: Construction| -> anyhow::Result<Option<Probability>> {
                Ok(if which.includes(c) {
                    Some(counter.p_local(&params, c, t)?)
                } else {
                    None
                })
            };
            let cover = value(Construction::Cover)?;
            let rank = value(Construction::Rank)?;
            rows.push((t, mode, cover, rank));
        }
    }
    let dec = |v: &Option<Probability>| {
        v.as_ref()
            .map(|x| format_decimal(x, 12))
            .unwrap_or_default()
    };
    for mode in selected_modes(cfg) {
        if let Some(m) = marker(mode) {
            let at = rows.iter().find(|r| r.0 == m && r.1 == mode);
            match at {
                Some(r) => eprintln!(
                    "marker {} t={m}: p_cover={} p_rank={}",
                    mode.as_str(),
                    dec(&r.2),
                    dec(&r.3)
                ),
                None => eprintln!("marker {} t={m} outside the emitted range", mode.as_str()),
            }
        }
    }
    let mut out = output(cfg)?;
    match cfg.format(Format::Csv) {
        Format::Csv => {
            writeln!(out, "t,p_cover,p_rank,mode")?;
            for (t, mode, cover, rank) in &rows {
                writeln!(out, "{t},{},{},{}", dec(cover), dec(rank), mode.as_str())?;
            }
        }
        Format::Json => {
            let table: Vec<_> = rows
                .iter()
                .map(|(t, mode, cover, rank)| {
                    json!({
                        "t": t,
                        "mode": mode.as_str(),
                        "p_cover": cover.as_ref().map(|x| format_decimal(x, 12)),
                        "p_rank": rank.as_ref().map(|x| format_decimal(x, 12)),
                        "p_cover_exact": cover.as_ref().map(fraction),
                        "p_rank_exact": rank.as_ref().map(fraction),
                        "marker": marker(*mode) == Some(*t),
                    })
                })
                .collect();
            write_json(
                &mut out,
                &json!({
                    "n": p.n,
                    "n_l": p.n_l(),
                    "mu": p.n / p.n_l(),
                    "rho": p.rho,
                    "distance": distance,
                    "markers": {
                        "errors": marker(Mode::Errors),
                        "erasures": marker(Mode::Erasures),
                    },
                    "rows": table,
                }),
            )?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

pub fn simulate(cfg: &ExperimentConfig, decode: bool) -> anyhow::Result<ExitCode> {
    let p = cfg.code_params(decode)?;
    let mode: Mode = cfg.mode.map(Into::into).unwrap_or(Mode::Erasures);
    if decode && mode != Mode::Erasures {
        return Err(invalid("--decode needs --mode erasures"));
    }
    let trials = cfg.trials.unwrap_or(10_000);
    if trials == 0 {
        return Err(invalid("--trials must be at least 1"));
    }
    let (lo, hi) = cfg.t_range(p.n, (0, 2 * p.n))?;
    let code = if decode {
        Some(build_code(cfg, &p)?)
    } else {
        None
    };
    let sim = SimulationConfig {
        params: pattern_params(&p, mode)?,
        t_values: (lo..=hi).collect(),
        trials,
        seed: cfg.seed()?,
    };
    let rows = run_simulation(&sim, code.as_ref(), |_| {})?;

    let mut out = output(cfg)?;
    match cfg.format(Format::Csv) {
        Format::Json => write_json(&mut out, &json!({"config": sim, "rows": rows}))?,
        Format::Csv => {
            writeln!(
                out,
                "t,mode,trials,hits_cover,empirical_cover,exact_cover,sigma_cover,deviation_cover,\
                 hits_rank,empirical_rank,exact_rank,sigma_rank,deviation_rank,repaired,disagreements"
            )?;
            for row in &rows {
                let (c, r) = (&row.cover, &row.rank);
                writeln!(
                    out,
                    "{},{},{},{},{:.6},{},{:.6e},{:.3},{},{:.6},{},{:.6e},{:.3},{},{}",
                    row.t,
                    mode.as_str(),
                    row.trials,
                    c.hits,
                    c.empirical,
                    c.exact,
                    c.sigma,
                    c.deviation,
                    r.hits,
                    r.empirical,
                    r.exact,
                    r.sigma,
                    r.deviation,
                    row.repaired.map(|v| v.to_string()).unwrap_or_default(),
                    row.disagreements,
                )?;
            }
        }
    }
    out.flush()?;

    let within =
        |f: fn(&cover_lrc::simulate::SimulationRow) -> bool| rows.iter().filter(|r| f(r)).count();
    eprintln!(
        "within 4 sigma: cover {}/{}, rank {}/{}",
        within(|r| r.cover.within(4.0)),
        rows.len(),
        within(|r| r.rank.within(4.0)),
        rows.len()
    );
    let disagreements: u64 = rows
        .iter()
        .map(|r| r.disagreements + r.weight_violations)
        .sum();
    if disagreements > 0 {
        eprintln!("predicate and local repair disagreed on {disagreements} trials");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

pub fn verify(cfg: &ExperimentConfig) -> anyhow::Result<ExitCode> {
    let p = cfg.code_params(false)?;
    let params = [
        pattern_params(&p, Mode::Errors)?,
        pattern_params(&p, Mode::Erasures)?,
    ];
    let code = match p.kprime {
        Some(_) => Some(build_code(cfg, &p)?),
        None => None,
    };
    let t_max = cfg.t_max.unwrap_or(6);
    let report = standard_suite(&params, code.as_ref(), t_max, cfg.seed()?)?;
    let mut out = output(cfg)?;
    match cfg.format(Format::Csv) {
        Format::Json => write_json(&mut out, &report)?,
        Format::Csv => {
            for check in &report.checks {
                match &check.counterexample {
                    None => writeln!(out, "PASS {} ({} cases)", check.name, check.cases)?,
                    Some(c) => {
                        writeln!(out, "FAIL {} after {} cases: {c}", check.name, check.cases)?
                    }
                }
            }
        }
    }
    out.flush()?;
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
