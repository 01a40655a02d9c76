//! spinlab: batch experiment runner. Every subcommand reads a validated
//! field preset (or a spec file path), runs one experiment, and emits a
//! self-describing CSV; identical configuration and seed reproduce identical
//! bytes. Exit codes: 0 success, 1 assertion failure, 2 configuration error.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use spinlab_cli::*;
use spinlab_core::error::Error;
use spinlab_core::spin::{Psi, SpinConfig};

#[derive(Parser)]
#[command(name = "spinlab", version, about = "spin symbol and class group experiments")]
struct Cli {
    /// preset name (cubic, quintic11, e8) or a field spec JSON path
    #[arg(long, global = true, default_value = "cubic")]
    preset: String,
    /// alias for --preset taking an explicit spec file path
    #[arg(long, global = true)]
    spec: Option<String>,
    /// worker threads (0 = rayon default)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// base seed for seeded sequences
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// output CSV path (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// validate a field spec and print the structural report
    Validate,
    /// emit the spin stream over split primes
    Spins {
        #[arg(long = "max-norm")]
        max_norm: u64,
        /// comma-separated automorphism indices for S
        #[arg(long = "set-S", default_value = "1")]
        set_s: String,
        /// optional psi table (JSON)
        #[arg(long)]
        psi: Option<PathBuf>,
    },
    /// joint sign pattern frequencies over split primes
    Density {
        #[arg(long = "max-norm")]
        max_norm: u64,
        #[arg(long = "set-S", default_value = "1")]
        set_s: String,
    },
    /// linear sums A(x) at checkpoints
    Type1 {
        /// comma-separated checkpoints; the largest bounds the enumeration
        #[arg(long, default_value = "10000,100000,1000000")]
        checkpoints: String,
        #[arg(long = "set-S", default_value = "1")]
        set_s: String,
        /// rational modulus m (progression condition m | a)
        #[arg(long, default_value_t = 1)]
        modulus: u64,
        /// include the per-residue-class breakdown mod F
        #[arg(long = "per-residue", default_value_t = false)]
        per_residue: bool,
    },
    /// bilinear sums B(x, y) with seeded unimodular coefficients
    Type2 {
        #[arg(long, default_value_t = 300)]
        x: u64,
        #[arg(long, default_value_t = 300)]
        y: u64,
        #[arg(long = "set-S", default_value = "1")]
        set_s: String,
        /// number of seeded sequence pairs
        #[arg(long, default_value_t = 5)]
        sequences: u64,
    },
    /// short character sum scanner over a modulus range
    Charsum {
        #[arg(long = "q-min", default_value_t = 1000)]
        q_min: u64,
        #[arg(long = "q-max", default_value_t = 2000)]
        q_max: u64,
        /// window length exponent: window = floor(q^(1/n))
        #[arg(long = "window-exponent", default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        l: u64,
    },
    /// class numbers and 2-power ranks of disc -4p
    Classrank {
        #[arg(long = "max-p")]
        max_p: u64,
        /// also mark splitting in the degree-8 preset
        #[arg(long = "with-split", default_value_t = true)]
        with_split: bool,
    },
    /// 16-rank vs spin-symbol correlation over the degree-8 field
    Govern16 {
        #[arg(long = "max-p")]
        max_p: u64,
        /// candidate moduli for the residue-cell constancy probe
        #[arg(long, default_value = "8,16,32")]
        moduli: String,
        /// which order-4 automorphism to use (1 or 3 in the preset ordering)
        #[arg(long = "order4-index", default_value_t = 1)]
        order4_index: usize,
    },
    /// witness pairs against a 16-rank governing field of given modulus
    Nogoverning {
        #[arg(long)]
        modulus: u64,
        #[arg(long = "max-p")]
        max_p: u64,
        #[arg(long, default_value_t = 10)]
        witnesses: usize,
    },
}

fn parse_list(text: &str) -> Result<Vec<u64>, Error> {
    text.split(',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::SpecFile(format!("bad number in list: {s}")))
        })
        .collect()
}

fn parse_indices(text: &str) -> Result<Vec<usize>, Error> {
    Ok(parse_list(text)?.into_iter().map(|v| v as usize).collect())
}

fn run(cli: Cli) -> Result<i32, Error> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }
    let preset_name = cli.spec.clone().unwrap_or_else(|| cli.preset.clone());
    match &cli.command {
        Command::Validate => {
            let field = load_field(&preset_name)?;
            print!("{}", field.report);
            println!("automorphism orders: {:?}", field.auto_order);
            println!("unit rank: {}", field.unit_rank);
            println!("box constant: {:.3}", field.box_constant);
            if let Some(f) = &field.big_f {
                println!("F = {} = {} * {} * {}", f.value, f.two_power, f.f, f.disc_abs);
            }
            Ok(0)
        }
        Command::Spins {
            max_norm,
            set_s,
            psi,
        } => {
            let field = load_field(&preset_name)?;
            let s = parse_indices(set_s)?;
            let psi = match psi {
                None => Psi::Trivial,
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::SpecFile(format!("psi table: {e}")))?;
                    let table = Psi::from_json(&text)?;
                    let big_f = field.compute_big_f()?;
                    let (checked, bad) =
                        table.check_unit_square_invariance(&field, &big_f.value, 200);
                    if bad > 0 {
                        return Err(Error::InvalidSpinConfig(format!(
                            "psi table violates unit-square invariance on {bad}/{checked} samples"
                        )));
                    }
                    table
                }
            };
            let config = SpinConfig::new(&field, s, psi)?;
            let records = spinlab_core::spin::spin_stream(&field, &config, *max_norm)?;
            spins_csv(&field, &config, &records, *max_norm).write(cli.out.as_deref())?;
            Ok(0)
        }
        Command::Density { max_norm, set_s } => {
            let field = load_field(&preset_name)?;
            let s = parse_indices(set_s)?;
            let report = run_density(&field, s.clone(), *max_norm)?;
            density_csv(&report, &field, *max_norm, &s).write(cli.out.as_deref())?;
            Ok(0)
        }
        Command::Type1 {
            checkpoints,
            set_s,
            modulus,
            per_residue,
        } => {
            let field = load_field(&preset_name)?;
            let s = parse_indices(set_s)?;
            let cps = parse_list(checkpoints)?;
            let report = run_type1(&field, s, *modulus, &cps, *per_residue)?;
            type1_csv(&report, &field, *modulus).write(cli.out.as_deref())?;
            Ok(0)
        }
        Command::Type2 {
            x,
            y,
            set_s,
            sequences,
        } => {
            let field = load_field(&preset_name)?;
            let s = parse_indices(set_s)?;
            let config = SpinConfig::new(&field, s, Psi::Trivial)?;
            let seeds: Vec<u64> = (0..*sequences).map(|i| cli.seed.wrapping_add(i)).collect();
            let reports = run_type2_seeds(&field, &config, *x, *y, &seeds)?;
            type2_csv(&reports, *x, *y, &seeds).write(cli.out.as_deref())?;
            Ok(0)
        }
        Command::Charsum {
            q_min,
            q_max,
            n,
            k,
            l,
        } => {
            let reports = run_charsum_range(*q_min, *q_max, *n, *k, *l)?;
            charsum_csv(&reports).write(cli.out.as_deref())?;
            Ok(0)
        }
        Command::Classrank { max_p, with_split } => {
            let field_e = if *with_split {
                Some(load_field("e8")?)
            } else {
                None
            };
            let rows = run_classrank(*max_p, field_e.as_deref())?;
            classrank_csv(&rows, *max_p).write(cli.out.as_deref())?;
            Ok(0)
        }
        Command::Govern16 {
            max_p,
            moduli,
            order4_index,
        } => {
            let field = load_field(if preset_name == "cubic" {
                "e8"
            } else {
                &preset_name
            })?;
            let mods = parse_list(moduli)?;
            let report = run_govern16(&field, *max_p, &mods, *order4_index)?;
            govern16_csv(&report, *max_p, *order4_index).write(cli.out.as_deref())?;
            Ok(0)
        }
        Command::Nogoverning {
            modulus,
            max_p,
            witnesses,
        } => {
            let field = load_field(if preset_name == "cubic" {
                "e8"
            } else {
                &preset_name
            })?;
            match run_nogoverning_witness(&field, *modulus, *max_p, *witnesses) {
                Ok(report) => {
                    witnesses_csv(&report, *max_p).write(cli.out.as_deref())?;
                    Ok(0)
                }
                Err(Error::InsufficientWitnesses { found, needed }) => {
                    eprintln!("insufficient witnesses: found {found}, needed {needed}");
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InconsistentCell(_) | Error::InsufficientWitnesses { .. } => {
                    ExitCode::from(1)
                }
                _ => ExitCode::from(2),
            }
        }
    }
}
