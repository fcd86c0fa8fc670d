//! `nlm-cpw`: denoise images, synthesize noise, run parameter sweeps and
//! self-check the numerical core.
//!
//! Exit codes: 0 success, 1 verification or trend failure, 2 usage error,
//! 3 I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use log::info;
use nlm_cpw::bench::{check_trends, emit_csv, run_sweep, summary_path, SweepConfig};
use nlm_cpw::cpw::CpwKind;
use nlm_cpw::nlm::{nlm_denoise, nlm_denoise_fast, KernelSpec, NlmParams};
use nlm_cpw::verify::{run_verification_with, DenoiseFn};
use nlm_cpw::{add_gaussian_noise, load_pgm, psnr, save_pgm, CpwScheme, Error, Image64, NoiseSpec};

#[derive(Parser, Debug)]
#[command(name = "nlm-cpw", version, about = "Non-local means with center-pixel-weight shrinkage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Denoise one PGM image.
    Denoise(DenoiseArgs),
    /// Add white Gaussian noise to a PGM image.
    AddNoise(AddNoiseArgs),
    /// Sweep the temperature grid and write CSV, summary and trend report.
    Sweep(SweepArgs),
    /// Run the built-in oracle checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct DenoiseArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// one | zero | stein | max | heur[:tau] | js | ljs[:block_radius]
    #[arg(long, default_value = "ljs")]
    cpw: CpwScheme,
    /// Temperature, or `auto` for sigma^2 |P|.
    #[arg(long, default_value = "auto")]
    h: HArg,
    /// Patch radius.
    #[arg(long, default_value_t = 3)]
    patch: usize,
    /// Search radius.
    #[arg(long, default_value_t = 15)]
    search: usize,
    /// Noise standard deviation.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Add noise of level --sigma before denoising.
    #[arg(long)]
    add_noise: bool,
    /// Where to write the noisy intermediate (with --add-noise).
    #[arg(long)]
    save_noisy: Option<PathBuf>,
    /// Clean image to report PSNR against.
    #[arg(long)]
    clean: Option<PathBuf>,
    /// flat | gaussian[:alpha]
    #[arg(long, default_value = "flat")]
    kernel: KernelSpec,
    /// Block radius for ljs.
    #[arg(long)]
    block: Option<usize>,
    /// Use the direct per-pixel implementation.
    #[arg(long)]
    reference: bool,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args, Debug)]
struct AddNoiseArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    outdir: PathBuf,
    /// Comma-separated PGM paths.
    #[arg(long)]
    images: Option<String>,
    /// Comma-separated noise levels.
    #[arg(long)]
    sigmas: Option<String>,
    /// Comma-separated patch radii.
    #[arg(long)]
    patch_radii: Option<String>,
    #[arg(long)]
    search_radius: Option<String>,
    /// Comma-separated scheme list.
    #[arg(long)]
    schemes: Option<String>,
    #[arg(long)]
    h_steps: Option<String>,
    #[arg(long)]
    h_lo_frac: Option<String>,
    #[arg(long)]
    h_hi_frac: Option<String>,
    /// linear | log
    #[arg(long)]
    h_spacing: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    kernel: Option<String>,
    /// dB bound for the large-h convergence check.
    #[arg(long)]
    trend_bound: Option<String>,
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Perturb the fast path to exercise the failure route.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Debug, Clone, Copy)]
enum HArg {
    Auto,
    Value(f64),
}

impl std::str::FromStr for HArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(HArg::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(HArg::Value(v)),
            _ => Err(format!("expected a positive number or `auto`, got `{s}`")),
        }
    }
}

/// Usage mistakes that clap cannot see on its own.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

fn set_threads(n: usize) -> anyhow::Result<()> {
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker threads")?;
    }
    Ok(())
}

fn cmd_denoise(a: DenoiseArgs) -> anyhow::Result<bool> {
    set_threads(a.threads)?;
    let mut scheme = a.cpw;
    if let Some(b) = a.block {
        match scheme.kind {
            CpwKind::LocalJamesStein { .. } => scheme.kind = CpwKind::LocalJamesStein { block_radius: Some(b) },
            _ => return Err(usage("--block only applies to --cpw ljs")),
        }
    }
    let needs_sigma =
        a.add_noise || matches!(a.h, HArg::Auto) || scheme.needs_sigma() || scheme.kind == CpwKind::Stein;
    let sigma = match a.sigma {
        Some(s) => s,
        None if needs_sigma => return Err(usage("--sigma is required for this combination of flags")),
        None => 0.0,
    };
    if a.save_noisy.is_some() && !a.add_noise {
        return Err(usage("--save-noisy requires --add-noise"));
    }

    let input: Image64 = load_pgm(&a.input)?;
    let y = if a.add_noise {
        let noisy = add_gaussian_noise(&input, NoiseSpec::new(sigma, a.seed)?);
        if let Some(p) = &a.save_noisy {
            save_pgm(&noisy, p)?;
        }
        noisy
    } else {
        input
    };

    let mut params = NlmParams::new(a.search, a.patch, 1.0).with_kernel(a.kernel);
    params.h = match a.h {
        HArg::Auto => sigma * sigma * params.patch_size() as f64,
        HArg::Value(h) => h,
    };
    info!("denoising {}x{} with {scheme}, h = {}", y.width(), y.height(), params.h);
    let out = if a.reference {
        nlm_denoise(&y, &params, &scheme, sigma)?
    } else {
        nlm_denoise_fast(&y, &params, &scheme, sigma)?
    };
    save_pgm(&out, &a.output)?;

    if let Some(clean_path) = &a.clean {
        let clean: Image64 = load_pgm(clean_path)?;
        println!("PSNR: {}", psnr(&clean, &out)?);
    }
    Ok(true)
}

fn cmd_add_noise(a: AddNoiseArgs) -> anyhow::Result<bool> {
    let spec = NoiseSpec::new(a.sigma, a.seed)?;
    let clean: Image64 = load_pgm(&a.input)?;
    save_pgm(&add_gaussian_noise(&clean, spec), &a.output)?;
    Ok(true)
}

fn sweep_config(a: &SweepArgs) -> anyhow::Result<SweepConfig> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let base = path.parent().unwrap_or(Path::new("."));
            SweepConfig::parse(&text, base)?
        }
        None => SweepConfig::default(),
    };
    let inline = [
        ("images", &a.images),
        ("sigmas", &a.sigmas),
        ("patch_radii", &a.patch_radii),
        ("search_radius", &a.search_radius),
        ("schemes", &a.schemes),
        ("h_steps", &a.h_steps),
        ("h_lo_frac", &a.h_lo_frac),
        ("h_hi_frac", &a.h_hi_frac),
        ("h_spacing", &a.h_spacing),
        ("seed", &a.seed),
        ("kernel", &a.kernel),
        ("trend_bound", &a.trend_bound),
    ];
    for (key, value) in inline {
        if let Some(v) = value {
            cfg.set(key, v, Path::new("."))?;
        }
    }
    cfg.validate()?;
    if cfg.images.is_empty() {
        return Err(usage("no images given (use --images or `images = ...` in --config)"));
    }
    Ok(cfg)
}

fn cmd_sweep(a: SweepArgs) -> anyhow::Result<bool> {
    set_threads(a.threads)?;
    let cfg = sweep_config(&a)?;
    fs::create_dir_all(&a.outdir).map_err(|e| Error::io(&a.outdir, e))?;
    let result = run_sweep(&cfg)?;
    let csv = a.outdir.join("sweep.csv");
    emit_csv(&result, &csv)?;
    let report = check_trends(&result, cfg.trend_bound_db);
    let report_path = a.outdir.join("trends.txt");
    fs::write(&report_path, report.to_string()).map_err(|e| Error::io(&report_path, e))?;
    print!("{report}");
    println!(
        "wrote {} records to {}, summary to {}",
        result.records.len(),
        csv.display(),
        summary_path(&csv).display()
    );
    Ok(report.all_passed())
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<bool> {
    let faulty = |y: &Image64, p: &NlmParams, s: &CpwScheme, sigma: f64| {
        nlm_denoise_fast(y, p, s, sigma)?.map(|v| v + 1e-6)
    };
    let fast: &DenoiseFn<'_> = if a.inject_fault { &faulty } else { &nlm_denoise_fast };
    let outcomes = run_verification_with(a.seed, fast)?;
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.name).collect();
    if !failed.is_empty() {
        eprintln!("failed: {}", failed.join(", "));
    }
    Ok(failed.is_empty())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Io { .. } | Error::Format(_)) => 3,
        Some(_) => 2,
        None if err.downcast_ref::<std::io::Error>().is_some() => 3,
        None => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Denoise(a) => cmd_denoise(a),
        Command::AddNoise(a) => cmd_add_noise(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            // library errors already render their source
            if e.downcast_ref::<Error>().is_some() {
                eprintln!("error: {e}");
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
