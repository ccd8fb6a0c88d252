use std::fmt::Write as _;
use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::Path;

use oweno::claw::{solution_dump, solve, total_variation, ErrorNorms, Grid1D, Problem, SolveOutput};
use oweno::lab::{
    markdown_table, run_discontinuous_order_study, run_smooth_order_study, trace_study, ConvergenceReport, StudyCase,
};
use oweno::{build_tables, DataMode, DoubleDouble, Scalar, Variant};

use crate::config::{Precision, RunConfig};
use crate::error::CliError;

const BOTH_MODES: [DataMode; 2] = [DataMode::PointValues, DataMode::CellAverages];

fn sci(x: f64) -> String {
    x.to_sci_string()
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))
}

pub fn tables(cfg: &RunConfig) -> Result<(), CliError> {
    let r = cfg.r();
    let dir = cfg.out_dir();
    ensure_dir(&dir)?;
    for mode in cfg.modes(&[DataMode::PointValues])? {
        let text = build_tables(r, mode)?.to_text();
        let path = dir.join(format!("tables_r{r}_{mode}.txt"));
        write_file(&path, &text)?;
        print!("{text}");
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Study {
    Smooth,
    Discontinuous,
}

fn study_cell<S: Scalar>(
    cfg: &RunConfig,
    r: usize,
    mode: DataMode,
    v: Variant,
    case: StudyCase,
    levels: usize,
) -> Result<(ConvergenceReport, Option<String>), CliError> {
    let params = cfg.params::<S>(v, r)?;
    let report = match case {
        StudyCase::Smooth { k } => run_smooth_order_study(r, mode, params, k, levels)?,
        StudyCase::Discontinuous { theta } => run_discontinuous_order_study(r, mode, params, theta, levels)?,
    };
    let trace = match cfg.trace {
        Some(_) => Some(trace_study(r, mode, params, case, levels)?),
        None => None,
    };
    Ok((report, trace))
}

fn order_study(cfg: &RunConfig, study: Study) -> Result<(), CliError> {
    let r = cfg.r();
    build_tables(r, DataMode::PointValues)?;
    let modes = cfg.modes(&BOTH_MODES)?;
    let variants = cfg.variants(&Variant::ALL)?;
    let precision = cfg.precision(Precision::Dd)?;
    let levels = cfg.levels.unwrap_or(6);
    let cases: Vec<StudyCase> = match study {
        Study::Smooth => {
            let ks = cfg.k.clone().unwrap_or_else(|| (0..=2 * r - 3).collect());
            ks.into_iter().map(|k| StudyCase::Smooth { k }).collect()
        }
        Study::Discontinuous => {
            let thetas = cfg.theta.clone().unwrap_or_else(|| (2 - r as i64..=r as i64 - 1).collect());
            thetas.into_iter().map(|theta| StudyCase::Discontinuous { theta }).collect()
        }
    };
    if cases.is_empty() {
        return Err(CliError::Usage("no study cases selected".into()));
    }

    let mut reports = Vec::new();
    let mut trace = String::new();
    let mut failures: Vec<CliError> = Vec::new();
    for &mode in &modes {
        for &v in &variants {
            for &case in &cases {
                let cell = match precision {
                    Precision::F64 => study_cell::<f64>(cfg, r, mode, v, case, levels),
                    Precision::Dd => study_cell::<DoubleDouble>(cfg, r, mode, v, case, levels),
                };
                match cell {
                    Ok((report, t)) => {
                        if let Some(t) = t {
                            let mut lines = t.lines();
                            let header = lines.next().unwrap_or_default();
                            if trace.is_empty() {
                                let _ = writeln!(trace, "variant,mode,k_or_theta,{header}");
                            }
                            for line in lines {
                                let _ = writeln!(trace, "{v},{mode},{},{line}", case.parameter());
                            }
                        }
                        reports.push(report);
                    }
                    Err(e) => failures.push(e.context(format!("{v} {mode} {}", case.parameter()))),
                }
            }
        }
    }

    let stem = match study {
        Study::Smooth => "order_study",
        Study::Discontinuous => "disc_study",
    };
    let dir = cfg.out_dir();
    ensure_dir(&dir)?;
    let mut csv = format!("{}\n", ConvergenceReport::CSV_HEADER);
    for rep in &reports {
        csv.push_str(&rep.csv_rows());
    }
    let md = markdown_table(&reports);
    write_file(&dir.join(format!("{stem}.csv")), &csv)?;
    write_file(&dir.join(format!("{stem}.md")), &md)?;
    if let Some(path) = &cfg.trace {
        write_file(path, &trace)?;
    }
    print!("{md}");
    // report every failed cell, exit with the class of the first
    if failures.is_empty() {
        return Ok(());
    }
    let first = failures.remove(0);
    for e in &failures {
        eprintln!("error: {e}");
    }
    Err(first)
}

pub fn smooth_study(cfg: &RunConfig) -> Result<(), CliError> {
    order_study(cfg, Study::Smooth)
}

pub fn disc_study(cfg: &RunConfig) -> Result<(), CliError> {
    order_study(cfg, Study::Discontinuous)
}

struct Run {
    variant: Variant,
    n: usize,
    grid: Grid1D,
    out: SolveOutput,
}

fn run_all(cfg: &RunConfig, problem: &Problem, default_variants: &[Variant], default_n: &[usize]) -> Result<Vec<Run>, CliError> {
    if cfg.precision(Precision::F64)? != Precision::F64 {
        return Err(CliError::Usage("the solver runs in f64 only".into()));
    }
    let r = cfg.r();
    let tables = build_tables(r, DataMode::CellAverages)?;
    let variants = cfg.variants(default_variants)?;
    let sizes = cfg.grid_sizes(default_n)?;
    let mut runs = Vec::new();
    for &variant in &variants {
        let params = cfg.params::<f64>(variant, r)?;
        for &n in &sizes {
            let grid = Grid1D::new(problem.domain.0, problem.domain.1, n, r)?;
            let out = solve(problem, grid, &tables, params)
                .map_err(|e| CliError::from(e).context(format!("{} {variant} N={n}", problem.kind)))?;
            runs.push(Run { variant, n, grid, out });
        }
    }
    Ok(runs)
}

fn dump_runs(dir: &Path, problem: &Problem, runs: &[Run]) -> Result<(), CliError> {
    for run in runs {
        let name = format!("{}_{}_N{}.dat", problem.kind, run.variant, run.n);
        write_file(&dir.join(name), &solution_dump(problem, &run.grid, &run.out.state))?;
    }
    Ok(())
}

/// Appends wall-clock times of the time loops; the only output that is not
/// reproducible byte for byte.
fn append_timing(dir: &Path, problem: &Problem, r: usize, runs: &[Run]) -> Result<(), CliError> {
    let path = dir.join("timing.csv");
    let fresh = !path.exists();
    let mut f = OpenOptions::new().create(true).append(true).open(&path)?;
    if fresh {
        writeln!(f, "problem,variant,r,N,steps,seconds")?;
    }
    for run in runs {
        writeln!(
            f,
            "{},{},{r},{},{},{}",
            problem.kind,
            run.variant,
            run.n,
            run.out.state.steps,
            sci(run.out.elapsed.as_secs_f64())
        )?;
    }
    Ok(())
}

pub fn solve_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let problem = cfg.problem()?;
    let runs = run_all(cfg, &problem, &[Variant::Oweno], &[100])?;
    let dir = cfg.out_dir();
    ensure_dir(&dir)?;
    dump_runs(&dir, &problem, &runs)?;
    append_timing(&dir, &problem, cfg.r(), &runs)?;

    let mut csv = String::from("problem,variant,r,N,steps,t,component,min,max,total_variation,l1,linf,drift\n");
    for run in &runs {
        let s = &run.out.state;
        for c in 0..s.m {
            let u = s.component(c);
            let lo = u.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let (l1, linf) = match (&run.out.errors, c) {
                (Some(e), 0) => (sci(e.l1), sci(e.linf)),
                _ => (String::new(), String::new()),
            };
            let drift = run.out.conservation_drift.as_ref().map(|d| sci(d[c])).unwrap_or_default();
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{c},{},{},{},{l1},{linf},{drift}",
                problem.kind,
                run.variant,
                cfg.r(),
                run.n,
                s.steps,
                sci(s.t),
                sci(lo),
                sci(hi),
                sci(total_variation(u)),
            );
        }
    }
    write_file(&dir.join(format!("solve_{}.csv", problem.kind)), &csv)?;
    print!("{csv}");
    Ok(())
}

fn rate(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

pub fn convergence(cfg: &RunConfig) -> Result<(), CliError> {
    let problem = cfg.problem()?;
    if !problem.has_exact() {
        return Err(CliError::Usage(format!("{} has no exact solution at t = {}", problem.kind, problem.t_final)));
    }
    let runs = run_all(cfg, &problem, &Variant::ALL, &[40, 80, 160, 320, 640])?;
    let dir = cfg.out_dir();
    ensure_dir(&dir)?;
    if cfg.dump {
        dump_runs(&dir, &problem, &runs)?;
    }
    append_timing(&dir, &problem, cfg.r(), &runs)?;

    let mut csv = String::from("problem,variant,r,N,l1,l1_rate,linf,linf_rate\n");
    let mut md = String::from("| variant | N | L1 | rate | Linf | rate |\n|---|---|---|---|---|---|\n");
    let mut prev: Option<(Variant, ErrorNorms)> = None;
    for run in &runs {
        let e = run.out.errors.expect("exact solution available");
        let rates = match prev {
            Some((v, p)) if v == run.variant => Some((rate(p.l1, e.l1), rate(p.linf, e.linf))),
            _ => None,
        };
        let (r1, r2) = rates.map(|(a, b)| (sci(a), sci(b))).unwrap_or_default();
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{r1},{},{r2}",
            problem.kind,
            run.variant,
            cfg.r(),
            run.n,
            sci(e.l1),
            sci(e.linf)
        );
        let (m1, m2) = rates.map(|(a, b)| (format!("{a:.2}"), format!("{b:.2}"))).unwrap_or_default();
        let _ = writeln!(
            md,
            "| {} | {} | {:.3e} | {m1} | {:.3e} | {m2} |",
            run.variant.label(),
            run.n,
            e.l1,
            e.linf
        );
        prev = Some((run.variant, e));
    }
    write_file(&dir.join(format!("convergence_{}.csv", problem.kind)), &csv)?;
    write_file(&dir.join(format!("convergence_{}.md", problem.kind)), &md)?;
    print!("{md}");
    Ok(())
}
