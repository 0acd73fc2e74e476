use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lrs_sparts::bounds::{
    effective_archimedean_with, effective_binary_with, effective_floorpower_with, effective_padic_with,
    EffectiveExponentCertificate,
};
use lrs_sparts::config::{Config, CONFIG_ENV};
use lrs_sparts::delta::compute_delta_with;
use lrs_sparts::harness::{rows_to_toml, scan, verify_certificate, write_csv, ScanOptions, ScanRow};
use lrs_sparts::recurrence::{classify_with, RecurrenceSpec, Sequence};
use lrs_sparts::sparts::PrimeSet;
use lrs_sparts::specfile::load_sequence;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

/// S-parts, delta exponents and effective exponent certificates for
/// integer linear recurrences and floor-power sequences.
#[derive(Parser)]
#[command(name = "lrs-sparts", version)]
struct Cli {
    #[command(flatten)]
    limits: Limits,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Limits {
    /// TOML file with precision_ceiling, factor_budget and mr_rounds.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Largest working precision in bits.
    #[arg(long, global = true)]
    precision_ceiling: Option<u64>,
    /// Pollard-rho iterations per factored number.
    #[arg(long, global = true)]
    factor_budget: Option<u64>,
    #[arg(long, global = true)]
    mr_rounds: Option<u32>,
}

impl Limits {
    fn resolve(&self) -> Result<Config> {
        let mut c = match &self.config {
            Some(p) => Config::load_unchecked(p).with_context(|| format!("reading config {}", p.display()))?,
            None => Config::default(),
        };
        if let Some(v) = self.precision_ceiling {
            c.precision_ceiling = v;
        }
        if let Some(v) = self.factor_budget {
            c.factor_budget = v;
        }
        if let Some(v) = self.mr_rounds {
            c.mr_rounds = v;
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Toml,
}

#[derive(Subcommand)]
enum Cmd {
    /// Degeneracy, dominant root and p-adic dominant roots.
    Classify {
        spec: PathBuf,
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
    },
    /// Exact terms, one per line.
    Terms {
        spec: PathBuf,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// S-part rows.
    Sparts {
        spec: PathBuf,
        #[arg(long)]
        set: String,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Limit exponent delta.
    Delta {
        spec: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Effective exponent certificate.
    Certify {
        spec: PathBuf,
        #[arg(long)]
        set: String,
        /// arch, binary, padic:<p> or floorpow.
        #[arg(long)]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate on the window starting at N0.
    Verify {
        cert: PathBuf,
        #[arg(long, default_value_t = 2000)]
        window: u64,
    },
    /// Greatest prime factors against the threshold curve.
    Gpf {
        spec: PathBuf,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        /// Primes for the S-part columns of the rows.
        #[arg(long, default_value = "2")]
        set: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn recurrence(seq: Sequence, what: &str) -> Result<RecurrenceSpec> {
    match seq {
        Sequence::Recurrence(r) => Ok(r),
        Sequence::FloorPower(_) => bail!("{what} needs a linear recurrence, not a floor-power sequence"),
    }
}

fn emit_rows(rows: &[ScanRow], format: Format, path: Option<&Path>) -> Result<()> {
    let out: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(out);
    match format {
        Format::Csv => write_csv(rows, &mut out)?,
        Format::Toml => out.write_all(rows_to_toml(rows)?.as_bytes())?,
    }
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = cli.limits.resolve()?;
    let ceiling = cfg.precision_ceiling;
    match cli.cmd {
        Cmd::Classify { spec, primes } => {
            let r = recurrence(load_sequence(&spec)?, "classify")?;
            let c = classify_with(&r, &primes, ceiling)?;
            println!("sequence = {r}");
            println!("degenerate = {}", c.degenerate);
            if c.degenerate {
                let w: Vec<String> = c.witnesses.iter().map(u64::to_string).collect();
                println!("root_of_unity_orders = [{}]", w.join(", "));
            }
            println!("distinct_roots = {}", c.t);
            println!("dominant_root = {}", c.dominant);
            for (i, cl) in c.clusters.iter().enumerate() {
                let z = cl.center_f64();
                println!(
                    "root {i}: {:.12} {:+.12}i, |root| in {}, multiplicity {}, coefficient nonzero: {:?}",
                    z.re,
                    z.im,
                    cl.modulus(),
                    cl.multiplicity,
                    c.nonzero_f[i]
                );
            }
            for (p, dom) in &c.padic {
                println!("padic_dominant[{p}] = {dom}");
            }
        }
        Cmd::Terms { spec, from, to } => {
            if to < from {
                bail!("empty range [{from}, {to}]");
            }
            let seq = load_sequence(&spec)?;
            let mut out = BufWriter::new(io::stdout().lock());
            for (n, u) in (from..=to).zip(seq.terms(from, to)?) {
                writeln!(out, "{n} {u}")?;
            }
            out.flush()?;
        }
        Cmd::Sparts { spec, set, from, to, csv, format } => {
            let seq = load_sequence(&spec)?;
            let s = PrimeSet::parse(&set)?;
            let rows = scan(&seq, &s, from, to, &ScanOptions::default())?;
            let format = if csv.is_some() { Format::Csv } else { format };
            emit_rows(&rows, format, csv.as_deref())?;
        }
        Cmd::Delta { spec, set } => {
            let r = recurrence(load_sequence(&spec)?, "delta")?;
            let s = PrimeSet::parse(&set)?;
            let d = compute_delta_with(&r, &s, ceiling)?;
            println!("delta = {}", d.delta);
            println!("largest_root_modulus = {}", d.a);
            for (p, e) in &d.a_p {
                println!("A_{p} = {p}^({e})");
            }
            println!("gcd_shortcut = {}", d.gcd_shortcut);
        }
        Cmd::Certify { spec, set, mode, out } => {
            let seq = load_sequence(&spec)?;
            let s = PrimeSet::parse(&set)?;
            let cc = cfg.cert();
            let cert: EffectiveExponentCertificate = match (mode.as_str(), &seq) {
                ("floorpow", Sequence::FloorPower(fp)) => effective_floorpower_with(fp, &s, &cc)?,
                ("floorpow", _) => bail!("floorpow needs a floor-power spec"),
                (_, Sequence::FloorPower(_)) => bail!("mode {mode} needs a linear recurrence"),
                ("arch", Sequence::Recurrence(r)) => effective_archimedean_with(r, &s, &cc)?,
                ("binary", Sequence::Recurrence(r)) => effective_binary_with(r, &s, &cc)?,
                (m, Sequence::Recurrence(r)) => match m.strip_prefix("padic:") {
                    Some(p) => {
                        let p: u64 = p.parse().with_context(|| format!("bad prime in {m}"))?;
                        effective_padic_with(r, &s, p, &cc)?
                    }
                    None => bail!("unknown mode {m}; expected arch, binary, padic:<p> or floorpow"),
                },
            };
            match out {
                Some(p) => {
                    cert.save(&p)?;
                    eprintln!("{cert}");
                }
                None => print!("{}", cert.to_toml()?),
            }
        }
        Cmd::Verify { cert, window } => {
            let c = EffectiveExponentCertificate::load(&cert)?;
            let rep = verify_certificate(&c, window)?;
            eprintln!("{rep}");
            print!("{}", rep.to_toml()?);
            if !rep.violations.is_empty() {
                std::process::exit(2);
            }
        }
        Cmd::Gpf { spec, from, to, epsilon, set, format } => {
            let seq = load_sequence(&spec)?;
            let opts = ScanOptions { gpf: Some(cfg.gpf()), epsilon, ..Default::default() };
            let rows = scan(&seq, &PrimeSet::parse(&set)?, from, to, &opts)?;
            emit_rows(&rows, format, None)?;
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
