use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use log::info;
use serde_json::json;

use lu3q_core::formulas::{predict, predict_even, predict_odd, FormulaError, RankPrediction};
use lu3q_core::geometry::format_vec;
use lu3q_core::incidence::{build_incidence, build_kim_matrix, System};
use lu3q_core::ldpc::{read_alist, simulate as run_simulation, write_alist, ChannelSpec, DecoderConfig, Provenance, CSV_HEADER};
use lu3q_core::{BitMatrix, BitVec, Exec, FieldSpec, LdpcCode, Quadrangle};

use crate::config::{build_field, ConfigError, RunConfig};
use crate::verify::{self, Status};
use crate::{FieldArgs, MatrixArgs};

fn resolve_field(file: &RunConfig, args: &FieldArgs) -> Result<FieldSpec, ConfigError> {
    let q = args.q.or(file.q).ok_or(ConfigError::Missing("q"))?;
    let field = build_field(q, args.irr.as_deref().or(file.irr.as_deref()))?;
    info!("GF({q}) with irreducible {:?}", field.irreducible());
    Ok(field)
}

fn parse_system(s: &str) -> Result<System, ConfigError> {
    s.parse().map_err(|e: String| ConfigError::invalid("system", e))
}

fn resolve_system(file: &RunConfig, args: &MatrixArgs) -> Result<Option<System>, ConfigError> {
    args.system.as_deref().or(file.system.as_deref()).map(parse_system).transpose()
}

fn resolve_transpose(file: &RunConfig, args: &MatrixArgs) -> bool {
    args.transpose || file.transpose.unwrap_or(false)
}

fn matrix_for(field: &FieldSpec, system: System, transpose: bool) -> BitMatrix {
    let h = match system {
        System::Kim => build_kim_matrix(field).bits,
        other => build_incidence(&Quadrangle::new(field.clone()), other).bits,
    };
    if transpose {
        h.transpose()
    } else {
        h
    }
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn construct(
    file: &RunConfig,
    field_args: &FieldArgs,
    list: Option<String>,
    matrix: &MatrixArgs,
    out: Option<PathBuf>,
) -> anyhow::Result<bool> {
    let field = resolve_field(file, field_args)?;
    let list = list.or_else(|| file.list.clone());
    let out = out.or_else(|| file.out.clone());
    if let Some(kind) = list {
        let g = Quadrangle::new(field);
        let mut text = String::new();
        match kind.as_str() {
            "points" => {
                for p in g.points() {
                    writeln!(text, "{}\t{}", p.index, format_vec(&p.coords))?;
                }
            }
            "lines" => {
                for l in g.lines() {
                    let pts: Vec<String> = l.points.iter().map(usize::to_string).collect();
                    let basis = format!("{} {}", format_vec(&l.basis[0]), format_vec(&l.basis[1]));
                    writeln!(text, "{}\t{basis}\t{}", l.index, pts.join(","))?;
                }
            }
            other => return Err(ConfigError::invalid("list", format!("'{other}' (expected points or lines)")).into()),
        }
        emit(out.as_deref(), &text)?;
        return Ok(true);
    }
    let system = resolve_system(file, matrix)?.ok_or(ConfigError::Missing("list or system"))?;
    let h = matrix_for(&field, system, resolve_transpose(file, matrix));
    emit(out.as_deref(), &write_alist(&h))?;
    Ok(true)
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn predicted_rank(pred: &RankPrediction, system: System) -> u128 {
    match system {
        System::Pl => pred.rank_pl,
        System::P1L1 | System::Kim => pred.rank_p1l1,
    }
}

pub fn rank(file: &RunConfig, field_args: &FieldArgs, matrix: &MatrixArgs, json: bool) -> anyhow::Result<bool> {
    let field = resolve_field(file, field_args)?;
    let q = field.q() as u64;
    let pred = predict(q).map_err(|_| ConfigError::NotPrimePower(q))?;
    let systems = match resolve_system(file, matrix)? {
        Some(s) => vec![s],
        None => vec![System::Pl, System::P1L1, System::Kim],
    };
    let transpose = resolve_transpose(file, matrix);
    let g = Quadrangle::new(field.clone());
    let mut rows = Vec::new();
    for system in systems {
        let h = match system {
            System::Kim => build_kim_matrix(&field).bits,
            other => build_incidence(&g, other).bits,
        };
        let h = if transpose { h.transpose() } else { h };
        let r = h.rank() as u128;
        let want = predicted_rank(&pred, system);
        rows.push((system, h.n_rows(), h.n_cols(), r, want));
    }
    let all = rows.iter().all(|&(_, _, _, r, w)| r == w);
    if json {
        let items: Vec<_> = rows
            .iter()
            .map(|&(s, nr, nc, r, w)| {
                json!({"system": s.name(), "rows": nr, "cols": nc, "rank": r as u64, "predicted": w as u64, "pass": r == w})
            })
            .collect();
        println!("{}", json!({"q": q, "transposed": transpose, "results": items, "pass": all}));
    } else {
        println!("{:<6} {:>11} {:>8} {:>10}  status", "system", "shape", "rank", "predicted");
        for (s, nr, nc, r, w) in rows {
            let status = if r == w { "PASS" } else { "FAIL" };
            println!("{:<6} {:>11} {r:>8} {w:>10}  {status}", s.name(), format!("{nr}x{nc}"));
        }
    }
    Ok(all)
}

pub fn verify(
    file: &RunConfig,
    field_args: &FieldArgs,
    checks: Vec<String>,
    seed: Option<u64>,
    json: bool,
) -> anyhow::Result<bool> {
    let field = resolve_field(file, field_args)?;
    let names = if checks.is_empty() { file.checks.clone().map(|c| c.into_vec()).unwrap_or_default() } else { checks };
    let selected = verify::select_checks(&names)?;
    let seed = seed.or(file.seed).unwrap_or(0);
    let g = Quadrangle::new(field);
    let mut rows = Vec::new();
    for name in selected {
        info!("running check {name}");
        rows.extend(verify::run(name, &g, seed));
    }
    let pass = rows.iter().all(|r| r.status != Status::Fail);
    if json {
        let items: Vec<_> = rows
            .iter()
            .map(|r| json!({"check": r.check, "status": r.status.to_string(), "basis": r.basis, "detail": r.detail}))
            .collect();
        println!("{}", json!({"q": g.q(), "seed": seed, "results": items, "pass": pass}));
    } else {
        let w = rows.iter().map(|r| r.check.len()).max().unwrap_or(5).max(5);
        let b = rows.iter().map(|r| r.basis.len()).max().unwrap_or(5);
        println!("{:<w$}  {:<13}  {:<b$}  detail", "check", "status", "basis");
        for r in &rows {
            println!("{:<w$}  {:<13}  {:<b$}  {}", r.check, r.status.to_string(), r.basis, r.detail);
        }
    }
    Ok(pass)
}

pub fn formulas(file: &RunConfig, t_max: Option<u32>, q_odd: Vec<u64>, json: bool) -> anyhow::Result<bool> {
    let mut t_max = t_max.or(file.t_max);
    let q_odd = if q_odd.is_empty() { file.q_odd.clone().unwrap_or_default() } else { q_odd };
    if t_max.is_none() && q_odd.is_empty() {
        t_max = Some(5);
    }
    let mut rows = Vec::new();
    for t in 1..=t_max.unwrap_or(0) {
        rows.push(predict_even(t).map_err(|e| ConfigError::invalid("t-max", e.to_string()))?);
    }
    for &q in &q_odd {
        rows.push(predict_odd(q).map_err(|e| match e {
            FormulaError::NotPrimePower(q) => ConfigError::NotPrimePower(q),
            other => ConfigError::invalid("q-odd", other.to_string()),
        })?);
    }
    if json {
        let items: Vec<_> = rows
            .iter()
            .map(|r| {
                json!({
                    "q": r.q, "t": r.t, "rank_pl": r.rank_pl.to_string(), "rank_p1l1": r.rank_p1l1.to_string(),
                    "dim_lu": r.dim_lu.to_string(), "gap": r.gap().to_string(),
                })
            })
            .collect();
        println!("{}", json!({"rows": items}));
    } else {
        println!("{:>14} {:>3} {:>22} {:>22} {:>22} {:>14}", "q", "t", "rank M(P,L)", "rank M(P1,L1)", "dim LU(3,q)", "gap");
        for r in rows {
            println!(
                "{:>14} {:>3} {:>22} {:>22} {:>22} {:>14}",
                r.q,
                r.t,
                r.rank_pl,
                r.rank_p1l1,
                r.dim_lu,
                r.gap()
            );
        }
    }
    Ok(true)
}

pub struct SimArgs {
    pub channel: Option<String>,
    pub p: Vec<f64>,
    pub decoder: Option<String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub max_iters: Option<usize>,
    pub normalization: Option<f64>,
    pub out: Option<PathBuf>,
}

pub fn simulate(
    file: &RunConfig,
    field_args: &FieldArgs,
    matrix: &MatrixArgs,
    args: SimArgs,
    json: bool,
) -> anyhow::Result<bool> {
    let field = resolve_field(file, field_args)?;
    let system = resolve_system(file, matrix)?.unwrap_or(System::Kim);
    let transposed = resolve_transpose(file, matrix);
    let channel = args.channel.or_else(|| file.channel.clone()).unwrap_or_else(|| "bsc".into());
    if channel != "bsc" {
        return Err(ConfigError::invalid("channel", format!("'{channel}' (only bsc is supported)")).into());
    }
    let ps = if args.p.is_empty() { file.p.clone().map(|p| p.into_vec()).unwrap_or_default() } else { args.p };
    if ps.is_empty() {
        return Err(ConfigError::Missing("p").into());
    }
    let max_iters = args.max_iters.or(file.max_iters).unwrap_or(50);
    let decoder = match args.decoder.or_else(|| file.decoder.clone()).as_deref().unwrap_or("minsum") {
        "minsum" => {
            let normalization = args.normalization.or(file.normalization).unwrap_or(0.75);
            DecoderConfig::MinSum { max_iters, normalization }
        }
        "bitflip" => DecoderConfig::BitFlip { max_iters },
        other => return Err(ConfigError::invalid("decoder", format!("'{other}' (expected minsum or bitflip)")).into()),
    };
    let trials = args.trials.or(file.trials).unwrap_or(1000);
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let out = args.out.or_else(|| file.out.clone());

    let q = field.q() as u64;
    let provenance = Provenance { system, q, transposed };
    let code = LdpcCode::new(matrix_for(&field, system, transposed)).with_provenance(provenance);
    info!("code n = {}, k = {}, {trials} trials per point", code.n(), code.k());

    let mut reports = Vec::new();
    for &p in &ps {
        let ch = ChannelSpec::bsc(p, seed).map_err(|e| ConfigError::invalid("p", e.to_string()))?;
        let report = run_simulation(&code, &ch, &decoder, trials, Exec::Parallel)
            .map_err(|e| ConfigError::invalid("trials", e.to_string()))?;
        info!("p = {p}: ber {:e}, fer {:e}", report.ber, report.fer);
        reports.push((ch, report));
    }

    let mut csv = format!("{CSV_HEADER}\n");
    for (ch, r) in &reports {
        csv.push_str(&r.csv_row(&provenance, ch.kind));
        csv.push('\n');
    }
    if let Some(path) = &out {
        write_file(path, &csv)?;
    }
    if json {
        let items: Vec<_> = reports
            .iter()
            .map(|(_, r)| {
                json!({
                    "p": r.p, "trials": r.trials, "bit_errors": r.bit_errors, "frame_errors": r.frame_errors,
                    "undetected_errors": r.undetected_errors, "ber": r.ber, "fer": r.fer,
                })
            })
            .collect();
        println!(
            "{}",
            json!({
                "q": q, "system": system.name(), "transposed": transposed, "n": code.n(), "k": code.k(),
                "channel": channel, "decoder": decoder.name(), "max_iters": max_iters, "seed": seed, "results": items,
            })
        );
    } else if out.is_none() {
        print!("{csv}");
    } else {
        println!("n = {}, k = {}, decoder {}", code.n(), code.k(), decoder.name());
        for (_, r) in &reports {
            println!("p = {:<10} ber = {:<12e} fer = {:e}", r.p, r.ber, r.fer);
        }
    }
    Ok(true)
}

fn write_dense_csv(h: &BitMatrix) -> String {
    let mut s = String::new();
    for row in h.rows() {
        let cells: Vec<&str> = row.to_bools().into_iter().map(|b| if b { "1" } else { "0" }).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn read_dense_csv(text: &str, n_cols: usize) -> anyhow::Result<BitMatrix> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let bits = line
            .split(',')
            .map(|c| match c {
                "0" => Ok(false),
                "1" => Ok(true),
                other => bail!("csv line {}: unexpected cell '{other}'", i + 1),
            })
            .collect::<anyhow::Result<Vec<bool>>>()?;
        if bits.len() != n_cols {
            bail!("csv line {}: {} cells, expected {n_cols}", i + 1, bits.len());
        }
        rows.push(BitVec::from_bools(&bits));
    }
    Ok(BitMatrix::from_rows(n_cols, &rows))
}

pub fn export(
    file: &RunConfig,
    field_args: &FieldArgs,
    matrix: &MatrixArgs,
    format: Option<String>,
    out: Option<PathBuf>,
) -> anyhow::Result<bool> {
    let field = resolve_field(file, field_args)?;
    let system = resolve_system(file, matrix)?.ok_or(ConfigError::Missing("system"))?;
    let out = out.or_else(|| file.out.clone()).ok_or(ConfigError::Missing("out"))?;
    let format = format.or_else(|| file.format.clone()).unwrap_or_else(|| "alist".into());
    let (alist, csv) = match format.as_str() {
        "alist" => (true, false),
        "csv" => (false, true),
        "both" => (true, true),
        other => return Err(ConfigError::invalid("format", format!("'{other}' (expected alist, csv or both)")).into()),
    };
    let h = matrix_for(&field, system, resolve_transpose(file, matrix));
    if alist {
        let path = if csv { out.with_extension("alist") } else { out.clone() };
        let text = write_alist(&h);
        write_file(&path, &text)?;
        let back = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let m = read_alist(&back).with_context(|| format!("parsing {}", path.display()))?;
        if m != h || write_alist(&m) != text {
            bail!("alist round trip through {} changed the matrix", path.display());
        }
        println!("wrote {} ({}x{})", path.display(), h.n_rows(), h.n_cols());
    }
    if csv {
        let path = if alist { out.with_extension("csv") } else { out.clone() };
        let text = write_dense_csv(&h);
        write_file(&path, &text)?;
        let back = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        if read_dense_csv(&back, h.n_cols())? != h {
            bail!("csv round trip through {} changed the matrix", path.display());
        }
        println!("wrote {} ({}x{})", path.display(), h.n_rows(), h.n_cols());
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_csv_round_trip() {
        let h = build_kim_matrix(&FieldSpec::with_order(3).unwrap()).bits;
        assert_eq!(read_dense_csv(&write_dense_csv(&h), h.n_cols()).unwrap(), h);
        assert!(read_dense_csv("0,2\n", 2).is_err());
    }
}
