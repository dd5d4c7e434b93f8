//! `imsim`: Monte Carlo simulation, union-bound analysis and comparison
//! tables for index-modulation schemes.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use imsim::analysis::{
    db_grid, fit_coding_gain, format_report_table, report_scheme_comparison, snr_at_abep, union_bound_abep,
    write_report_csv, write_sweep_csv, GAIN_TARGET_ABEP,
};
use imsim::harness::{
    fig3_checks, manifest_json, preset, preset_ids, preset_source, write_records_csv, ExperimentConfig, Preset,
    SimRecord, FIG3_CURVES,
};
use imsim::numerics::ConstellationSpec;
use imsim::schemes::{GsfimBlock, Scheme, SchemeConfig, SchemeKind};

#[derive(Parser, Debug)]
#[command(name = "imsim", version, about = "Index-modulation link simulator and analysis toolkit")]
struct Cli {
    /// Master seed (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Output CSV path (standard output when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a Monte Carlo experiment file or a built-in simulation preset.
    Simulate(SimulateArgs),
    /// Union-bound ABEP and tail fit for the scheme in a config file.
    Analyze(AnalyzeArgs),
    /// Coding-gain sweep from a built-in or user sweep preset.
    Sweep(SweepArgs),
    /// Comparison table of schemes (RF chains, SE, diversity, CSI needs).
    Report(ReportArgs),
    /// List built-in presets.
    Presets {
        /// Print the TOML source of one preset.
        #[arg(long)]
        show: Option<String>,
    },
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Also write a JSON manifest (config echo, input hash, full records).
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long)]
    config: PathBuf,
    /// Reference config for the coding gain (defaults to the scheme itself).
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    snr_start: f64,
    #[arg(long, default_value_t = 60.0)]
    snr_stop: f64,
    #[arg(long, default_value_t = 0.5)]
    snr_step: f64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    /// A sweep preset file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Comma-separated scheme names, e.g. `sm,gsm,vblast`.
    #[arg(long, value_delimiter = ',', default_value = "sm,gsm,vblast,qsm,dsm,ofdm,im_ofdm,sm_ofdm,mimo_ofdm_im,gsfim")]
    schemes: Vec<String>,
    #[arg(long, default_value_t = 4)]
    nt: usize,
    #[arg(long, default_value_t = 4)]
    nr: usize,
    #[arg(long, default_value = "qpsk")]
    constellation: String,
    #[arg(long, default_value_t = 64)]
    subcarriers: usize,
}

fn output(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    Ok(ExperimentConfig::from_file(path)?)
}

fn note_low_confidence(records: &[SimRecord]) {
    for r in records.iter().filter(|r| r.low_confidence) {
        eprintln!(
            "note: {} at {} dB has only {} bit errors in {} bits (low confidence)",
            r.scheme, r.snr_db, r.bit_errors, r.bits_sent
        );
    }
}

fn simulate(cli: &Cli, args: &SimulateArgs) -> Result<()> {
    let mut experiments = match (&args.config, &args.preset) {
        (Some(path), _) => vec![load_config(path)?],
        (None, Some(id)) => match preset(id)? {
            Preset::Sim(s) => s.experiments(),
            Preset::Sweep(_) => bail!("preset `{id}` is a sweep; use `imsim sweep --preset {id}`"),
        },
        (None, None) => unreachable!("clap requires one of --config/--preset"),
    };
    for e in &mut experiments {
        if let Some(seed) = cli.seed {
            e.master_seed = seed;
        }
    }
    let mut records = Vec::new();
    for e in &experiments {
        eprintln!("simulating {} {}", e.display_label(), e.scheme.params());
        records.extend(imsim::harness::run_monte_carlo(e, cli.workers)?);
    }
    note_low_confidence(&records);
    let out = cli.out.clone().or_else(|| experiments.first().and_then(|e| e.output.clone()));
    write_records_csv(&records, output(out.as_deref())?)?;
    if let Some(path) = &args.manifest {
        let mut text = String::new();
        for e in &experiments {
            text.push_str(&manifest_json(e, cli.workers, &records_of(&records, e))?);
            text.push('\n');
        }
        std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let labels: Vec<String> = experiments.iter().map(|e| e.display_label()).collect();
    if labels.len() == FIG3_CURVES.len() && FIG3_CURVES.iter().all(|c| labels.iter().any(|l| l == c)) {
        let c = fig3_checks(&records)?;
        eprintln!("orderings: SM-OFDM best among IM at low SNR: {}", c.sm_ofdm_best_low_among_im);
        eprintln!("orderings: MIMO-OFDM-IM best at high SNR: {}", c.mimo_ofdm_im_best_high);
        eprintln!("orderings: SM-OFDM worst at high SNR: {}", c.sm_ofdm_worst_high);
        eprintln!("orderings: IM below V-BLAST at low SNR: {}", c.im_worse_than_vblast_low);
        for (l, ok) in &c.im_beats_vblast_high {
            eprintln!("orderings: {l} beats V-BLAST at high SNR: {ok}");
        }
    }
    Ok(())
}

fn records_of(records: &[SimRecord], e: &ExperimentConfig) -> Vec<SimRecord> {
    let label = e.display_label();
    records.iter().filter(|r| r.scheme == label && r.params == e.scheme.params()).cloned().collect()
}

fn analyze(cli: &Cli, args: &AnalyzeArgs) -> Result<()> {
    if !(args.snr_step > 0.0) || args.snr_stop <= args.snr_start {
        bail!("need snr_start < snr_stop and a positive snr_step");
    }
    let grid = db_grid(args.snr_start, args.snr_stop, args.snr_step);
    let cfg = load_config(&args.config)?;
    let curve = union_bound_abep(&Scheme::<f64>::new(cfg.scheme.clone())?, &grid)?;
    let reference = match &args.reference {
        Some(p) => union_bound_abep(&Scheme::<f64>::new(load_config(p)?.scheme)?, &grid)?,
        None => curve.clone(),
    };
    let fit = fit_coding_gain(&curve, &reference)?;
    eprintln!("scheme: {} {}", cfg.scheme.label(), cfg.scheme.params());
    eprintln!("diversity order: {:.3} (fit residual {:.2e})", fit.diversity_order, fit.fit_residual);
    match snr_at_abep(&curve, GAIN_TARGET_ABEP) {
        Ok(s) => eprintln!("Es/N0 at ABEP {GAIN_TARGET_ABEP:e}: {s:.3} dB"),
        Err(_) => eprintln!("ABEP {GAIN_TARGET_ABEP:e} not reached on the grid"),
    }
    eprintln!("coding gain vs reference: {:.3} dB", fit.coding_gain_db);
    if fit.diversity_mismatch {
        eprintln!("note: diversity orders differ by more than 0.3; the gain is SNR-dependent");
    }
    let mut w = output(cli.out.as_deref())?;
    writeln!(w, "snr_db,abep")?;
    for (s, p) in curve.snr_db.iter().zip(&curve.abep) {
        writeln!(w, "{s},{p:.6e}")?;
    }
    Ok(())
}

fn sweep(cli: &Cli, args: &SweepArgs) -> Result<()> {
    let p = match (&args.preset, &args.config) {
        (Some(id), _) => preset(id)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            Preset::from_toml_str(&text).with_context(|| format!("in {}", path.display()))?
        }
        (None, None) => unreachable!("clap requires one of --preset/--config"),
    };
    let Preset::Sweep(suite) = p else {
        bail!("`{}` is a simulation preset; use `imsim simulate --preset {}`", p.id(), p.id());
    };
    let res = suite.run()?;
    for t in &res.checks.trends {
        eprintln!("trend {}: {}", if t.pass { "holds" } else { "fails" }, t.description);
    }
    write_sweep_csv(&res.rows, output(cli.out.as_deref())?)?;
    Ok(())
}

fn default_config(name: &str, a: &ReportArgs, c: ConstellationSpec) -> Result<SchemeConfig> {
    let (nt, nr, n) = (a.nt, a.nr, a.subcarriers);
    let psk = if c.kind == imsim::numerics::ConstellationKind::Psk { c } else { ConstellationSpec::psk(c.order) };
    Ok(match SchemeKind::parse(name)? {
        SchemeKind::Sm => SchemeConfig::sm(nt, nr, c),
        SchemeKind::Gsm => SchemeConfig::gsm(nt, 2.min(nt), nr, c),
        SchemeKind::Vblast => SchemeConfig::vblast(nt, nr, c),
        SchemeKind::Qsm => SchemeConfig::qsm(nt, nr, c),
        SchemeKind::Dsm => SchemeConfig::dsm(nt, nr, psk),
        SchemeKind::Ofdm => SchemeConfig::ofdm(n, nr, c),
        SchemeKind::ImOfdm => SchemeConfig::im_ofdm(n, 4, 2, nr, c),
        SchemeKind::SmOfdm => SchemeConfig::sm_ofdm(nt, n, nr, c),
        SchemeKind::MimoOfdmIm => SchemeConfig::mimo_ofdm_im(nt, n, 4, 2, nr, c),
        SchemeKind::Gsfim => {
            SchemeConfig::gsfim(nt, n, GsfimBlock { antennas: nt, subcarriers: 2, active: nt.max(2) - 1 }, nr, c)
        }
    })
}

fn report(cli: &Cli, args: &ReportArgs) -> Result<()> {
    let c: ConstellationSpec = args.constellation.parse()?;
    let configs = args.schemes.iter().map(|s| default_config(s, args, c)).collect::<Result<Vec<_>>>()?;
    let rows = report_scheme_comparison(&configs)?;
    print!("{}", format_report_table(&rows));
    if let Some(p) = &cli.out {
        write_report_csv(&rows, output(Some(p))?)?;
    }
    Ok(())
}

fn presets(show: Option<&str>) -> Result<()> {
    if let Some(id) = show {
        print!("{}", preset_source(id)?);
        return Ok(());
    }
    for id in preset_ids() {
        let p = preset(id)?;
        let kind = match p {
            Preset::Sim(_) => "simulate",
            Preset::Sweep(_) => "sweep",
        };
        println!("{id:<14} {kind:<9} {}", p.description());
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate(a) => simulate(cli, a),
        Command::Analyze(a) => analyze(cli, a),
        Command::Sweep(a) => sweep(cli, a),
        Command::Report(a) => report(cli, a),
        Command::Presets { show } => presets(show.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("imsim: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
