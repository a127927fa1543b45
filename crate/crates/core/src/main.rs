use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cartier_core::report::{
    self, cmd_cert, cmd_points, cmd_wound, cmd_zp, CertConfig, Common, Format, PointsConfig,
    WoundConfig, ZpConfig,
};
use cartier_core::selftest::cmd_selftest;
use cartier_core::{Error, GaloisField, Place, RationalFunction};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "cartier", version, about = "Cartier operator and local-global obstruction computations over F_p(t)")]
struct Cli {
    /// Characteristic.
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// Degree of the coefficient field over F_p.
    #[arg(long, global = true, default_value_t = 1)]
    m: u32,
    /// Local precision M.
    #[arg(long, global = true, default_value_t = 20)]
    precision: i64,
    /// json, csv or text.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Local classes, global search and certificates for G = Z/p.
    Zp {
        /// Comma-separated N values for x_N.
        #[arg(long, default_value = "0")]
        ns: String,
        /// Comma-separated N:K pairs.
        #[arg(long)]
        pairs: Option<String>,
        /// Comma-separated places, e.g. `t,t+1,1/t`.
        #[arg(long, conflicts_with = "places_deg")]
        places: Option<String>,
        /// All places of degree at most d, plus 1/t.
        #[arg(long)]
        places_deg: Option<usize>,
        /// Height bound for the global preimage search.
        #[arg(long, default_value_t = 4)]
        search_bound: usize,
        #[arg(long, default_value_t = 50)]
        pmax: usize,
        #[arg(long, default_value_t = 50)]
        lmax: usize,
    },
    /// Local solvability for G = {t x^p = y^p - y}.
    Wound {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long, default_value = "t")]
        places: String,
    },
    /// Local and global points on t x^p = y^p - y.
    Points {
        #[arg(long, default_value = "t")]
        place: String,
        /// Comma-separated rational functions x.
        #[arg(long)]
        xs: Option<String>,
        /// Run the global search with this height bound.
        #[arg(long)]
        global_search: Option<usize>,
    },
    /// Non-periodicity certificate for x_N - x_K.
    Cert {
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 50)]
        pmax: usize,
        #[arg(long, default_value_t = 50)]
        lmax: usize,
        /// M for the telescoping spot check.
        #[arg(long, default_value_t = 1)]
        tele_m: usize,
        /// s for the telescoping spot check.
        #[arg(long, default_value_t = 4)]
        tele_s: u32,
    },
    /// Run the invariant suite.
    Selftest {
        #[arg(long)]
        only: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Failed(String),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T, Error>) -> Result<Vec<T>, Failure> {
    s.split(',').map(|x| f(x.trim()).map_err(usage)).collect()
}

fn parse_u32(s: &str) -> Result<u32, Error> {
    s.parse().map_err(|_| Error::Parse { what: "integer", input: s.into() })
}

fn parse_pair(s: &str) -> Result<(u32, u32), Error> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse { what: "pair N:K", input: s.into() })?;
    Ok((parse_u32(a)?, parse_u32(b)?))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let format: Format = cli.format.parse().map_err(usage)?;
    let common = Common::new(cli.p, cli.m, cli.precision, cli.seed).map_err(usage)?;
    let field: &GaloisField = &common.field;
    let failed = |e: Error| Failure::Failed(e.to_string());

    let report = match cli.command {
        Command::Zp { ns, pairs, places, places_deg, search_bound, pmax, lmax } => {
            let places = match (places, places_deg) {
                (_, Some(d)) => Place::all_up_to_degree(field, d),
                (Some(s), None) => report::parse_places(field, &s).map_err(usage)?,
                (None, None) => vec![Place::t(field)],
            };
            let pairs = match pairs {
                Some(s) => parse_list(&s, parse_pair)?,
                None => Vec::new(),
            };
            if pairs.iter().any(|(n, k)| n >= k) {
                return Err(usage("every pair N:K needs N < K"));
            }
            if pmax == 0 {
                return Err(usage("--pmax must be positive"));
            }
            let cfg = ZpConfig {
                ns: parse_list(&ns, parse_u32)?,
                pairs,
                places,
                search_bound,
                pmax,
                lmax,
            };
            cmd_zp(&common, &cfg).map_err(failed)?
        }
        Command::Wound { n, k, places } => {
            if n <= 0 || k.is_some_and(|k| k <= 0) {
                return Err(usage("the wound family needs N, K > 0"));
            }
            if k == Some(n) {
                return Err(usage("K must differ from N"));
            }
            let places = report::parse_places(field, &places).map_err(usage)?;
            cmd_wound(&common, &WoundConfig { n, k, places }).map_err(failed)?
        }
        Command::Points { place, xs, global_search } => {
            let place = Place::parse(field, &place).map_err(usage)?;
            let xs = match xs {
                Some(s) => parse_list(&s, |x| RationalFunction::parse(field, x))?,
                None => Vec::new(),
            };
            cmd_points(&common, &PointsConfig { place, xs, global_search }).map_err(failed)?
        }
        Command::Cert { n, k, pmax, lmax, tele_m, tele_s } => {
            if k <= n || pmax == 0 || tele_m == 0 {
                return Err(usage("cert needs K > N, --pmax > 0 and --tele-m > 0"));
            }
            if cli.m != 1 {
                return Err(usage("cert needs the prime field (--m 1)"));
            }
            let cfg = CertConfig { n, k, pmax, lmax, telescope: (tele_m, tele_s) };
            cmd_cert(&common, &cfg).map_err(failed)?
        }
        Command::Selftest { only } => {
            if let Some(m) = &only {
                if !cartier_core::selftest::MODULES.contains(&m.as_str()) {
                    return Err(usage(format!("unknown module {m}")));
                }
            }
            cmd_selftest(cli.seed, only.as_deref()).map_err(failed)?
        }
    };
    let text = report.render(format).map_err(failed)?;
    match &cli.out {
        Some(path) => fs::write(path, &text).map_err(|e| Failure::Failed(format!("{path}: {e}")))?,
        None => print!("{text}"),
    }
    Ok(report.verified)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("{line}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: verification failed");
            ExitCode::from(EXIT_FAILED)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILED)
        }
    }
}
