//! `cyclomap` — construct cyclotomic-mapping permutation polynomials over a
//! small finite field, invert them in closed form, detect involutions,
//! count fixed points, enumerate whole families, and cross-validate every
//! closed-form result against brute force.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 domain precondition
//! violated, 4 not a permutation.

use clap::{Parser, Subcommand, ValueEnum};
use cyclomap::cyclo::{self, CycloSpec};
use cyclomap::permcheck::{
    self, count_fixed_points, invert, is_involution, is_permutation, oracle_eval_table,
    oracle_fixed_points, oracle_is_involution, oracle_is_permutation,
};
use cyclomap::polyform::{expand, format_poly};
use cyclomap::search::{self, PermRecord, SearchQuery};
use cyclomap::{Error, FieldCtx};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cyclomap", version, about)]
struct Cli {
    /// Field to work in: a preset name (F25, F64), a preset file path, or
    /// an inline `p m modulus_csv gamma_csv` description.
    #[arg(long, global = true, env = "CYCLOMAP_FIELD")]
    field: Option<String>,

    /// Worker threads for search (default: machine parallelism). Output is
    /// identical for any value.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a mapping spec into its unique polynomial mod x^q - x.
    Expand {
        /// Mapping spec, e.g. "ell=2 r=1,7 k=0,2".
        spec: String,
    },
    /// Print the closed-form compositional inverse of a permutation spec.
    Invert {
        spec: String,
        /// Also print the inverse polynomial.
        #[arg(long)]
        polys: bool,
    },
    /// Report permutation/involution status and the nonzero fixed-point count.
    Check { spec: String },
    /// Enumerate permutation specs, inverses and involutions.
    Search {
        /// Single index to enumerate.
        #[arg(long, conflicts_with = "ell_max")]
        ell: Option<i64>,
        /// Enumerate indices up to this bound (divisors of q-1 only).
        #[arg(long)]
        ell_max: Option<i64>,
        /// Keep involutions only.
        #[arg(long)]
        involutions: bool,
        /// Keep records with at most this many nonzero fixed points.
        #[arg(long)]
        max_fp: Option<i64>,
        /// Render the f and f^-1 polynomial columns.
        #[arg(long)]
        polys: bool,
        /// Constrain the whole r-vector (single value broadcasts),
        /// e.g. --fix-r 1 or --fix-r 1,7.
        #[arg(long)]
        fix_r: Option<String>,
        /// Stop after this many rows.
        #[arg(long)]
        limit: Option<usize>,
        /// Print only "pps=N involutions=M".
        #[arg(long)]
        count_only: bool,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        /// Enumerate each requested index independently instead of dropping
        /// indices subsumed by a larger one.
        #[arg(long)]
        per_index: bool,
    },
    /// Cross-validate the closed-form criteria against brute force over
    /// every canonical spec of the requested indices.
    Verify {
        #[arg(long, conflicts_with_all = ["ell_max", "all_ell"])]
        ell: Option<i64>,
        #[arg(long, conflicts_with = "all_ell")]
        ell_max: Option<i64>,
        /// Verify every divisor of q-1.
        #[arg(long)]
        all_ell: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Tab-separated values with a header row.
    Tsv,
    /// Human-readable lines.
    Text,
    /// TSV normalized to the golden-fixture polynomial convention
    /// (identical to tsv: that convention is the native rendering).
    Golden,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli.jobs.unwrap_or(0); // 0 = rayon default
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_) => 2,
        Error::NotAPermutation => 4,
        _ => 3,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let ctx = resolve_field(cli.field.as_deref())?;
    match cli.command {
        Command::Expand { spec } => {
            let spec = cyclo::parse_spec(&ctx, &spec)?;
            println!("{}", format_poly(&ctx, &expand(&ctx, &spec)));
        }
        Command::Invert { spec, polys } => {
            let spec = cyclo::parse_spec(&ctx, &spec)?;
            let inverse = invert(&ctx, &spec)?;
            println!("{inverse}");
            if polys {
                println!("{}", format_poly(&ctx, &expand(&ctx, &inverse)));
            }
        }
        Command::Check { spec } => {
            let spec = cyclo::parse_spec(&ctx, &spec)?;
            let pp = is_permutation(&spec);
            let inv = is_involution(&ctx, &spec);
            let fp = count_fixed_points(&ctx, &spec);
            println!(
                "pp={} involution={} nonzero_fixed_points={fp}",
                yes_no(pp),
                yes_no(inv)
            );
        }
        Command::Search {
            ell,
            ell_max,
            involutions,
            max_fp,
            polys,
            fix_r,
            limit,
            count_only,
            format,
            per_index,
        } => {
            let query = SearchQuery {
                ell_list: index_list(&ctx, ell, ell_max, false)?,
                involutions_only: involutions,
                max_fixed_points: max_fp,
                emit_polys: polys,
                fix_r: fix_r.map(|s| parse_csv(&s)).transpose()?,
                per_index,
            };
            if count_only {
                let (pps, invs) = search::count_summary_with(&ctx, &query)?;
                println!("pps={pps} involutions={invs}");
            } else {
                run_search(&ctx, &query, limit, format)?;
            }
        }
        Command::Verify { ell, ell_max, all_ell } => {
            let ells = index_list(&ctx, ell, ell_max, all_ell)?;
            run_verify(&ctx, &ells)?;
        }
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn parse_csv(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
        })
        .collect()
}

/// `--ell L` names one index; `--ell-max L` (or `--all-ell`) takes every
/// divisor of q-1 up to the bound.
fn index_list(
    ctx: &FieldCtx,
    ell: Option<i64>,
    ell_max: Option<i64>,
    all_ell: bool,
) -> Result<Vec<i64>, Error> {
    let order = ctx.order();
    if let Some(ell) = ell {
        if ell < 1 || order % ell != 0 {
            return Err(Error::EllDoesNotDivide { ell, group_order: order });
        }
        return Ok(vec![ell]);
    }
    if all_ell {
        return Ok(search::divisors(order));
    }
    match ell_max {
        Some(max) => Ok(search::divisors(order).into_iter().filter(|&d| d <= max).collect()),
        None => Err(Error::Parse(
            "search/verify need --ell, --ell-max, or --all-ell".into(),
        )),
    }
}

fn resolve_field(arg: Option<&str>) -> Result<FieldCtx, Error> {
    let arg = arg.ok_or_else(|| {
        Error::Parse("no field: pass --field or set CYCLOMAP_FIELD".into())
    })?;
    if let Some(ctx) = FieldCtx::preset(arg) {
        return Ok(ctx);
    }
    if std::path::Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg)
            .map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))?;
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| Error::Parse(format!("{arg}: no field line found")))?;
        return FieldCtx::parse_field_line(line);
    }
    FieldCtx::parse_field_line(arg)
}

const TSV_HEADER: &str = "ell\tr\tk\trr\tkk\tinvolution\tnonzero_fixed_points";

fn run_search(
    ctx: &FieldCtx,
    query: &SearchQuery,
    limit: Option<usize>,
    format: Format,
) -> Result<(), Error> {
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    if format != Format::Text {
        let mut header = TSV_HEADER.to_string();
        if query.emit_polys {
            header.push_str("\tf\tf_inv");
        }
        writeln!(out, "{header}").map_err(io_err)?;
    }
    let stream = search::enumerate(ctx, query)?;
    let limit = limit.unwrap_or(usize::MAX);
    for record in stream.take(limit) {
        let line = match format {
            Format::Tsv | Format::Golden => tsv_row(&record, query.emit_polys),
            Format::Text => text_row(&record),
        };
        writeln!(out, "{line}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

fn io_err(e: std::io::Error) -> Error {
    Error::Parse(format!("io error: {e}"))
}

fn csv(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn tsv_row(rec: &PermRecord, polys: bool) -> String {
    let mut row = format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}",
        rec.spec.ell(),
        csv(rec.spec.r()),
        csv(rec.spec.k()),
        csv(rec.inverse.r()),
        csv(rec.inverse.k()),
        yes_no(rec.involution),
        rec.nonzero_fixed_points
    );
    if polys {
        row.push('\t');
        row.push_str(rec.poly_text.as_deref().unwrap_or(""));
        row.push('\t');
        row.push_str(rec.inverse_poly_text.as_deref().unwrap_or(""));
    }
    row
}

fn text_row(rec: &PermRecord) -> String {
    let mut line = format!(
        "{} -> {} involution={} nonzero_fixed_points={}",
        rec.spec,
        rec.inverse,
        yes_no(rec.involution),
        rec.nonzero_fixed_points
    );
    if let Some(f) = &rec.poly_text {
        line.push_str(&format!("\n  f     = {f}"));
    }
    if let Some(g) = &rec.inverse_poly_text {
        line.push_str(&format!("\n  f^-1  = {g}"));
    }
    line
}

/// Walks every canonical spec (all `r` in `[1,s]^ell`, all `k` in
/// `[0,q-2]^ell`, no pruning) and checks the closed forms against the value
/// table: permutation criterion vs bijectivity, inverse composition both
/// ways, involution flag vs pointwise self-inversion, fixed-point formula
/// vs direct count. `checked` counts the permutation specs; criterion/
/// bijectivity disagreements are folded into `composition_failures`.
fn run_verify(ctx: &FieldCtx, ells: &[i64]) -> Result<(), Error> {
    use rayon::prelude::*;
    let mut checked = 0u64;
    let mut composition_failures = 0u64;
    let mut involution_mismatches = 0u64;
    let mut fixedpoint_mismatches = 0u64;
    for &ell in ells {
        let s = ctx.order() / ell;
        // shard on the full r-space (coprime or not: non-permutations are
        // part of the criterion check)
        let r_vectors = full_r_space(ell as usize, s);
        let tallies: Vec<[u64; 4]> = r_vectors
            .par_iter()
            .map(|r| verify_shard(ctx, ell, r))
            .collect();
        for t in tallies {
            checked += t[0];
            composition_failures += t[1];
            involution_mismatches += t[2];
            fixedpoint_mismatches += t[3];
        }
    }
    println!(
        "checked={checked} composition_failures={composition_failures} \
         involution_mismatches={involution_mismatches} fixedpoint_mismatches={fixedpoint_mismatches}"
    );
    Ok(())
}

fn full_r_space(ell: usize, s: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![1i64; ell];
    loop {
        out.push(cur.clone());
        let mut pos = ell;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] <= s {
                break;
            }
            cur[pos] = 1;
        }
    }
}

fn verify_shard(ctx: &FieldCtx, ell: i64, r: &[i64]) -> [u64; 4] {
    let order = ctx.order();
    let mut tally = [0u64; 4];
    let mut k = vec![0i64; ell as usize];
    loop {
        let spec = cyclo::canonicalize(ctx, ell, r, &k).expect("canonical");
        verify_one(ctx, &spec, &mut tally);
        let mut pos = ell as usize;
        loop {
            if pos == 0 {
                return tally;
            }
            pos -= 1;
            k[pos] += 1;
            if k[pos] < order {
                break;
            }
            k[pos] = 0;
        }
    }
}

fn verify_one(ctx: &FieldCtx, spec: &CycloSpec, tally: &mut [u64; 4]) {
    let table = oracle_eval_table(ctx, spec);
    let criterion = is_permutation(spec);
    let bijective = oracle_is_permutation(ctx, &table);
    if criterion != bijective {
        tally[1] += 1;
    }
    if count_fixed_points(ctx, spec) != oracle_fixed_points(ctx, &table) {
        tally[3] += 1;
    }
    let involution_flag = is_involution(ctx, spec);
    if involution_flag != oracle_is_involution(ctx, &table) {
        tally[2] += 1;
    }
    if !criterion {
        return;
    }
    tally[0] += 1;
    let inverse = match invert(ctx, spec) {
        Ok(inv) => inv,
        Err(_) => {
            tally[1] += 1;
            return;
        }
    };
    let inverse_table = oracle_eval_table(ctx, &inverse);
    if !permcheck::tables_compose_to_identity(ctx, &table, &inverse_table)
        || !permcheck::tables_compose_to_identity(ctx, &inverse_table, &table)
    {
        tally[1] += 1;
    }
}
