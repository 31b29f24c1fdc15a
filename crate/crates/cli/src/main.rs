//! `frct` — encrypt, decrypt, measure, and benchmark images.
//!
//! Exit codes: 0 success, 2 usage, 3 I/O or format error, 4 precondition
//! violation, 5 wrong key. Errors go to stderr; stdout carries only data.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use frct_core::bench::{emit_table, run_bench, BenchConfig, Scheme, TableFormat};
use frct_core::container::EncryptedContainer;
use frct_core::metrics::{histogram, MetricsReport};
use frct_core::pipeline::{
    decrypt_image, derive_params, encrypt_image, quantized_render, CipherMode,
    PERMITTED_BLOCK_SIZES,
};
use frct_core::raster::{load_image, save_image};
use frct_core::Error;

const EXIT_IO: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;
const EXIT_WRONG_KEY: u8 = 5;

#[derive(Parser)]
#[command(name = "frct", version, about = "Block-wise Fourier image encryption")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt a PGM/PPM image
    Encrypt(EncryptArgs),
    /// Decrypt an encrypted container back to a PGM/PPM image
    Decrypt(DecryptArgs),
    /// Compare two images and print fidelity metrics
    Metrics(MetricsArgs),
    /// Export per-channel 256-bin histograms as CSV
    Histogram(HistogramArgs),
    /// Time the pipeline variants against an AES-CTR baseline
    Bench(BenchArgs),
}

#[derive(Args)]
struct EncryptArgs {
    /// Input image (binary PGM or PPM, maxval 255)
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Output path: container (lossless) or viewable image (quantized)
    #[arg(long = "out", value_name = "PATH")]
    output: PathBuf,
    /// Passphrase; FRCT_KEY from the environment is used when the flag is absent
    #[arg(long, env = "FRCT_KEY", hide_env_values = true)]
    key: String,
    #[arg(long, default_value_t = 32, value_parser = parse_block_size)]
    block_size: u16,
    #[arg(long, value_enum, default_value_t = ModeArg::Lossless)]
    mode: ModeArg,
}

#[derive(Args)]
struct DecryptArgs {
    /// Encrypted container
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Recovered image path
    #[arg(long = "out", value_name = "PATH")]
    output: PathBuf,
    #[arg(long, env = "FRCT_KEY", hide_env_values = true)]
    key: String,
}

#[derive(Args)]
struct MetricsArgs {
    /// Reference image
    #[arg(long = "ref", value_name = "PATH")]
    reference: PathBuf,
    /// Image under test
    #[arg(long = "test", value_name = "PATH")]
    test: PathBuf,
    #[arg(long, value_enum, default_value_t = MetricsFormat::Csv)]
    format: MetricsFormat,
}

#[derive(Args)]
struct HistogramArgs {
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// CSV output path, 256 rows with one count column per channel
    #[arg(long = "out", value_name = "PATH")]
    output: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Square image sizes, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = vec![256u32, 512])]
    sizes: Vec<u32>,
    /// Scheme names, comma separated, or "all"
    #[arg(long, value_delimiter = ',', default_value = "all")]
    schemes: Vec<String>,
    #[arg(long, default_value_t = 5)]
    reps: u32,
    #[arg(long, value_enum, default_value_t = BenchFormat::Markdown)]
    format: BenchFormat,
    /// Seed for synthetic test images
    #[arg(long, default_value_t = 0xF7C7)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lossless,
    Quantized,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricsFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFormat {
    Csv,
    Markdown,
}

fn parse_block_size(s: &str) -> Result<u16, String> {
    let value: u16 = s
        .parse()
        .map_err(|_| format!("`{s}` is not an integer"))?;
    if PERMITTED_BLOCK_SIZES.contains(&value) {
        Ok(value)
    } else {
        Err(format!(
            "--block-size must be one of {PERMITTED_BLOCK_SIZES:?}, got {value}"
        ))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Encrypt(args) => cmd_encrypt(args),
        Command::Decrypt(args) => cmd_decrypt(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Histogram(args) => cmd_histogram(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Format(_) | Error::UnsupportedDepth(_) => EXIT_IO,
        Error::Precondition(_) => EXIT_PRECONDITION,
        Error::WrongKey => EXIT_WRONG_KEY,
    }
}

fn cmd_encrypt(args: EncryptArgs) -> Result<(), Error> {
    let mode = match args.mode {
        ModeArg::Lossless => CipherMode::Lossless,
        ModeArg::Quantized => CipherMode::Quantized,
    };
    let params = derive_params(args.key.as_bytes(), args.block_size, mode)?;
    let img = load_image(&args.input)?;
    let container = encrypt_image(&img, &params)?;
    eprintln!(
        "derived arnold iterations: {}; key fingerprint: {}",
        params.arnold_iterations,
        hex(&params.key_fingerprint)
    );
    match mode {
        CipherMode::Lossless => container.write_to(&args.output)?,
        CipherMode::Quantized => save_image(&quantized_render(&container)?, &args.output)?,
    }
    Ok(())
}

fn cmd_decrypt(args: DecryptArgs) -> Result<(), Error> {
    let container = EncryptedContainer::read_from(&args.input)?;
    let params = derive_params(
        args.key.as_bytes(),
        container.block_size,
        container.mode,
    )?;
    let img = decrypt_image(&container, &params)?;
    save_image(&img, &args.output)?;
    Ok(())
}

fn cmd_metrics(args: MetricsArgs) -> Result<(), Error> {
    let reference = load_image(&args.reference)?;
    let test = load_image(&args.test)?;
    let report = MetricsReport::compare(&reference, &test)?;
    match args.format {
        MetricsFormat::Csv => print!("{}", report.to_csv()),
        MetricsFormat::Json => println!("{}", report.to_json()),
    }
    Ok(())
}

fn cmd_histogram(args: HistogramArgs) -> Result<(), Error> {
    let img = load_image(&args.input)?;
    let hists = histogram(&img);
    let mut csv = String::from(match hists.len() {
        1 => "bin,gray\n",
        _ => "bin,red,green,blue\n",
    });
    for bin in 0..256 {
        csv.push_str(&bin.to_string());
        for h in &hists {
            csv.push(',');
            csv.push_str(&h[bin].to_string());
        }
        csv.push('\n');
    }
    std::fs::write(&args.output, csv).map_err(Error::Io)?;
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), Error> {
    let schemes = if args.schemes.iter().any(|s| s == "all") {
        Scheme::all().to_vec()
    } else {
        let mut schemes = Vec::with_capacity(args.schemes.len());
        for name in &args.schemes {
            match Scheme::parse(name) {
                Some(scheme) => schemes.push(scheme),
                None => {
                    // Unknown scheme names are a usage error (exit 2).
                    clap::Error::raw(
                        clap::error::ErrorKind::InvalidValue,
                        format!(
                            "unknown scheme `{name}`; expected one of {:?}\n",
                            Scheme::all().map(|s| s.name())
                        ),
                    )
                    .exit()
                }
            }
        }
        schemes
    };
    let cfg = BenchConfig {
        image_sizes: args.sizes,
        schemes,
        repetitions: args.reps,
        seed: args.seed,
    };
    let rows = run_bench(&cfg)?;
    let format = match args.format {
        BenchFormat::Csv => TableFormat::Csv,
        BenchFormat::Markdown => TableFormat::Markdown,
    };
    print!("{}", emit_table(&rows, format));
    Ok(())
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
