use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use relmass::cayley::{GroupTable, WeightedGeneratorSet};
use relmass::graph::{build_pyramid_cube, pyramid};
use relmass::heat::{open_grid, uniform_grid, CurveMeta};
use relmass::hypercube::{self, MAX_CLOSED_FORM_DIM};
use relmass::lab;
use relmass::lamplighter::{LamplighterParams, LamplighterSpectrum};
use relmass::montecarlo::{self, LampTarget, McEstimate};
use relmass::output::fmt17;
use relmass::{CurveQuantity, Error, Result, SpectralDecomposition};

use crate::csv::CsvFile;
use crate::{
    AppendixArgs, BlowupArgs, Command, Figure1Args, GraphArgs, McCommand, McOptions, ScanArgs, VerifyClaimArgs,
    WitnessArgs,
};

pub struct Context {
    pub out_dir: PathBuf,
    /// Invocation line embedded in every CSV header.
    pub header: String,
}

impl Context {
    fn csv(&self, name: &str, extra: &[String]) -> Result<CsvFile> {
        let mut lines = vec![self.header.clone()];
        lines.extend_from_slice(extra);
        CsvFile::create(&self.out_dir, name, &lines)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Found,
    NotFound,
}

impl Outcome {
    fn from_found(found: bool) -> Self {
        if found {
            Self::Found
        } else {
            Self::NotFound
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// Walker at the origin, all lamps off.
    U,
    /// Walker at the origin, only the origin's lamp on.
    V,
}

pub fn run(ctx: &Context, command: Command) -> Result<Outcome> {
    match command {
        Command::Figure1(args) => figure1(ctx, args),
        Command::Witness(args) => witness(args),
        Command::Appendix(args) => appendix(ctx, args),
        Command::VerifyClaim(args) => verify_claim(ctx, args),
        Command::Mc { which } => mc(ctx, which),
        Command::Blowup(args) => blowup(ctx, args),
        Command::Scan(args) => scan(ctx, args),
        Command::Graph(args) => graph(args),
    }
}

fn figure1(ctx: &Context, args: Figure1Args) -> Result<Outcome> {
    if args.dims.is_empty() {
        return Err(Error::Validation("no dimensions given".into()));
    }
    if let Some(&d) = args.dims.iter().find(|&&d| d == 0 || d > MAX_CLOSED_FORM_DIM) {
        return Err(Error::Size(format!("dimension {d} outside 1..={MAX_CLOSED_FORM_DIM}")));
    }
    let grid = uniform_grid(args.start, args.end, args.step)?;
    let columns = hypercube::c_d_table(&args.dims, &grid)?;
    let mut out = ctx.csv("figure1.csv", &[])?;
    let mut names = vec!["t".to_string()];
    names.extend(args.dims.iter().map(|d| format!("c{d}")));
    out.row(&names)?;
    for (i, &t) in grid.iter().enumerate() {
        let mut row = vec![fmt17(t)];
        row.extend(columns.iter().map(|col| fmt17(col[i])));
        out.row(&row)?;
    }
    let path = out.finish()?;
    println!("wrote {} ({} rows)", path.display(), grid.len());
    Ok(Outcome::Found)
}

fn witness(args: WitnessArgs) -> Result<Outcome> {
    let grid = uniform_grid(args.start, args.end, args.step)?;
    match hypercube::find_witness(args.d, &grid, args.margin)? {
        Some(w) => {
            println!(
                "d={} t1={} t2={} C(t1)={} C(t2)={} gap={}",
                args.d,
                fmt17(w.t1),
                fmt17(w.t2),
                fmt17(w.value1),
                fmt17(w.value2),
                fmt17(w.margin)
            );
            Ok(Outcome::Found)
        }
        None => {
            println!("d={}: no decrease larger than {} on the grid", args.d, args.margin);
            Ok(Outcome::NotFound)
        }
    }
}

fn appendix(ctx: &Context, args: AppendixArgs) -> Result<Outcome> {
    let graph = build_pyramid_cube();
    let dec = SpectralDecomposition::new(&graph)?;
    let (u, v) = (pyramid::TOP[0], pyramid::APEX_TOP);
    let lambda2 = dec.lambda2();
    let projection =
        lab::eigenspace_projection_norm(&dec, lambda2, &lab::pyramid_second_eigenvector(), lab::SIMPLICITY_GAP)?;
    let report = lab::proposition_check(&graph, &dec, u, v)?;
    let grid = open_grid(args.end, args.points)?;
    let hit = lab::find_r_exceeds_one(&dec, u, v, &grid)?;
    let late = 20.0 / lambda2;

    println!("lambda2            = {}", fmt17(lambda2));
    println!("(7 - sqrt 17) / 8  = {}", fmt17(lab::pyramid_lambda2()));
    println!("lambda3 - lambda2  = {}", report.lambda3.map_or("n/a".into(), |l3| fmt17(l3 - lambda2)));
    println!("c                  = {}", fmt17(lab::pyramid_apex_entry()));
    println!("projection norm    = {}", fmt17(projection));
    if let (Some(fu), Some(fv)) = (report.f2_u, report.f2_v) {
        println!("f2(u), f2(v)       = {}, {}", fmt17(fu), fmt17(fv));
    }
    println!("hypotheses hold    = {}", report.verdict);
    match &hit {
        Some(h) => {
            println!("r > 1 from t       = {}", fmt17(h.crossing));
            println!("peak r             = {} at t = {}", fmt17(h.peak_r), fmt17(h.peak_time));
        }
        None => println!("r never exceeds 1 on (0, {}]", args.end),
    }
    println!("r(20 / lambda2)    = {}", fmt17(dec.relative_mass(u, v, late)?));

    let mut curve = dec.sample_curve(u, v, &grid, CurveQuantity::RelativeMass)?;
    curve.meta = CurveMeta {
        quantity: CurveQuantity::RelativeMass.name().into(),
        graph: graph.provenance().into(),
        params: format!("u={u} v={v}"),
    };
    let mut out = ctx.csv("appendix_r.csv", &[format!("{} on {} with {}", curve.meta.quantity, curve.meta.graph, curve.meta.params)])?;
    curve.write_csv(out.writer())?;
    out.finish()?;
    Ok(Outcome::from_found(report.verdict && hit.is_some()))
}

fn verify_claim(ctx: &Context, args: VerifyClaimArgs) -> Result<Outcome> {
    let mut out = ctx.csv("verify_claim.csv", &[])?;
    out.row(&["d", "epsilon", "t", "puu", "puv", "residual_uu", "residual_uv", "bound"])?;
    let mut all_hold = true;
    for &d in &args.d {
        for &eps in &args.epsilon {
            let spec = LamplighterSpectrum::new(LamplighterParams::new(d, eps)?)?;
            for &t in &args.t {
                let r = spec.verify_claim(t)?;
                all_hold &= r.holds();
                println!(
                    "d={d} eps={eps} t={t}: residual_uu={:.3e} residual_uv={:.3e} bound={:.3e} {}",
                    r.residual_uu,
                    r.residual_uv,
                    r.bound,
                    if r.holds() { "ok" } else { "VIOLATED" }
                );
                out.row(&[
                    d.to_string(),
                    fmt17(eps),
                    fmt17(t),
                    fmt17(r.puu),
                    fmt17(r.puv),
                    fmt17(r.residual_uu),
                    fmt17(r.residual_uv),
                    fmt17(r.bound),
                ])?;
            }
        }
    }
    out.finish()?;
    Ok(Outcome::from_found(all_hold))
}

const MC_COLUMNS: [&str; 10] = ["quantity", "d", "epsilon", "t", "estimate", "stderr", "n", "n_conditioned", "seed", "chunks"];

fn mc_row(quantity: &str, d: u32, epsilon: Option<f64>, t: f64, est: &McEstimate) -> Vec<String> {
    vec![
        quantity.to_string(),
        d.to_string(),
        epsilon.map(fmt17).unwrap_or_default(),
        fmt17(t),
        fmt17(est.mean),
        fmt17(est.std_error),
        est.n.to_string(),
        est.n_conditioned.to_string(),
        est.seed.to_string(),
        est.chunks.to_string(),
    ]
}

fn mc_header(opts: &McOptions, samples: u64) -> Vec<String> {
    vec![format!("seed={} chunks={} samples={samples}", opts.seed, opts.chunks)]
}

fn mc(ctx: &Context, which: McCommand) -> Result<Outcome> {
    match which {
        McCommand::CD { d, t, opts } => {
            let n = opts.samples.unwrap_or(1_000_000);
            let est = montecarlo::estimate_c_d(d, t, n, opts.seed, opts.chunks)?;
            println!("C_{d}({t}) ~ {} +- {} ({} of {n} runs returned)", est.mean, est.std_error, est.n_conditioned);
            let mut out = ctx.csv("mc_c_d.csv", &mc_header(&opts, n))?;
            out.row(&MC_COLUMNS)?;
            out.row(&mc_row("C_d", d, None, t, &est))?;
            out.finish()?;
            Ok(Outcome::Found)
        }
        McCommand::Theorem { d, epsilon, t1, t2, opts } => {
            let (t1, t2) = match (t1, t2) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    let grid = uniform_grid(0.0, 30.0, 0.05)?;
                    match hypercube::find_witness(d, &grid, hypercube::DEFAULT_WITNESS_MARGIN)? {
                        Some(w) => (w.t1, w.t2),
                        None => {
                            println!("d={d}: no witness pair on the default grid; pass --t1 and --t2");
                            return Ok(Outcome::NotFound);
                        }
                    }
                }
            };
            let n = opts.samples.unwrap_or(4_000_000);
            let report = montecarlo::theorem_demo(d, epsilon, t1, t2, n, opts.seed, opts.chunks)?;
            let (r1, r2) = report.r_estimates();
            println!("t1={} t2={}", fmt17(t1), fmt17(t2));
            println!("C(t1) ~ {} +- {} (quadrature {})", report.c1.mean, report.c1.std_error, report.quad1);
            println!("C(t2) ~ {} +- {} (quadrature {})", report.c2.mean, report.c2.std_error, report.quad2);
            println!("eps C(t1) = {r1:e}, eps C(t2) = {r2:e}");
            println!("agrees with quadrature: {}", report.agrees_with_quadrature());
            println!("{}", report.verdict());
            let mut out = ctx.csv("mc_theorem.csv", &mc_header(&opts, n))?;
            out.row(&MC_COLUMNS)?;
            out.row(&mc_row("C_d", d, Some(epsilon), t1, &report.c1))?;
            out.row(&mc_row("C_d", d, Some(epsilon), t2, &report.c2))?;
            out.finish()?;
            Ok(Outcome::from_found(report.supported()))
        }
        McCommand::PUv { d, epsilon, t, target, opts } => {
            let n = opts.samples.unwrap_or(1_000_000);
            let (lamp_target, name) = match target {
                Target::U => (LampTarget::U, "p_uu"),
                Target::V => (LampTarget::V, "p_uv"),
            };
            let est = montecarlo::estimate_lamplighter_prob(d, epsilon, t, lamp_target, n, opts.seed, opts.chunks)?;
            println!("{name}({t}) ~ {} +- {}", est.mean, est.std_error);
            let mut out = ctx.csv("mc_p_uv.csv", &mc_header(&opts, n))?;
            out.row(&MC_COLUMNS)?;
            out.row(&mc_row(name, d, Some(epsilon), t, &est))?;
            out.finish()?;
            Ok(Outcome::Found)
        }
    }
}

fn parse_gens(group: &GroupTable, specs: &[String]) -> Result<WeightedGeneratorSet> {
    let gens = specs
        .iter()
        .map(|s| {
            let (g, w) = s
                .split_once(':')
                .ok_or_else(|| Error::Validation(format!("generator {s:?} is not ELEMENT:WEIGHT")))?;
            let g = g.trim().parse::<usize>().map_err(|e| Error::Validation(format!("generator {s:?}: {e}")))?;
            let w = w.trim().parse::<f64>().map_err(|e| Error::Validation(format!("generator {s:?}: {e}")))?;
            Ok((g, w))
        })
        .collect::<Result<Vec<_>>>()?;
    WeightedGeneratorSet::new(group, gens)
}

fn blowup(ctx: &Context, args: BlowupArgs) -> Result<Outcome> {
    let group = GroupTable::cyclic(args.order)?;
    let gens = parse_gens(&group, &args.gens)?;
    let grid = uniform_grid(args.start, args.end, args.step)?;
    let rows = lab::blowup_convergence(&group, &gens, args.u, args.v, &args.sizes, &grid)?;
    let mut out = ctx.csv("blowup.csv", &[])?;
    out.row(&["N", "deg", "sup_r_dev", "sup_p_dev"])?;
    for row in &rows {
        println!("N={:<4} deg={:<4} sup_r_dev={:.6e} sup_p_dev={:.6e}", row.n, row.degree, row.sup_r_dev, row.sup_p_dev);
        out.row(&[row.n.to_string(), row.degree.to_string(), fmt17(row.sup_r_dev), fmt17(row.sup_p_dev)])?;
    }
    out.finish()?;
    Ok(Outcome::Found)
}

fn scan(ctx: &Context, args: ScanArgs) -> Result<Outcome> {
    let graph = args.graph.build()?;
    let dec = SpectralDecomposition::new(&graph)?;
    let grid = open_grid(args.end, args.points)?;
    let pairs: Vec<(usize, usize)> = match (args.v, args.graph.default_pair()?) {
        (Some(v), _) => vec![(args.u, v)],
        (None, Some(pair)) => vec![pair],
        (None, None) => (0..graph.n()).filter(|&v| v != args.u).map(|v| (args.u, v)).collect(),
    };
    let mut out = ctx.csv("scan.csv", &[graph.provenance().to_string()])?;
    out.row(&["u", "v", "decrease_t1", "decrease_t2", "decrease", "exceeds_from", "peak_t", "peak_r"])?;
    let mut found = false;
    for (u, v) in pairs {
        let dip = lab::monotonicity_scan(&dec, u, v, &grid, args.margin)?;
        let above = lab::find_r_exceeds_one(&dec, u, v, &grid)?;
        found |= dip.is_some() || above.is_some();
        let mut row = vec![u.to_string(), v.to_string()];
        match &dip {
            Some(w) => {
                println!("({u},{v}): r decreases by {:.6e} from t={} to t={}", w.margin, fmt17(w.t1), fmt17(w.t2));
                row.extend([fmt17(w.t1), fmt17(w.t2), fmt17(w.margin)]);
            }
            None => row.extend([String::new(), String::new(), String::new()]),
        }
        match &above {
            Some(h) => {
                println!("({u},{v}): r > 1 from t={}, peak {} at t={}", fmt17(h.crossing), fmt17(h.peak_r), fmt17(h.peak_time));
                row.extend([fmt17(h.crossing), fmt17(h.peak_time), fmt17(h.peak_r)]);
            }
            None => row.extend([String::new(), String::new(), String::new()]),
        }
        out.row(&row)?;
    }
    out.finish()?;
    if !found {
        println!("no decrease above {} and no r > 1 found on (0, {}]", args.margin, args.end);
    }
    Ok(Outcome::from_found(found))
}

fn graph(args: GraphArgs) -> Result<Outcome> {
    let graph = args.graph.build()?;
    match args.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            graph.write_edge_list(&mut w)?;
            w.flush()?;
        }
        None => graph.write_edge_list(std::io::stdout().lock())?,
    }
    Ok(Outcome::Found)
}
