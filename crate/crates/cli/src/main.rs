//! Command-line front end for strategy-indifferent games of best choice.
//!
//! Exit codes: 0 success or verified true, 1 well-formed but verified false,
//! 2 input or usage error, 3 resource limit.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bestchoice::stats::{
    full_bine_game_sizes, results_row, results_table, verify_eq_321, verify_lemma_comb,
};
use bestchoice::tree::DEFAULT_ANTICHAIN_BUDGET;
use bestchoice::{
    annotate, bine_of_competitors, grow_game, is_strategy_indifferent, play, ClassLabel, Error,
    ExactRational, GrowthMap, Method, PermMultiset, PrefixTree, ResultsRow, StrikeSet,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "bestchoice",
    version,
    about = "Strategy-indifferent games of best choice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the prefix tree P_N, optionally annotated with a game's preimage counts.
    Tree {
        #[arg(long)]
        n: usize,
        #[arg(long, value_name = "FILE")]
        annotate: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TreeFormat::Dot)]
        format: TreeFormat,
    },
    /// List or count the maximal antichains of P_N.
    Antichains {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count_only: bool,
        #[arg(long, default_value_t = DEFAULT_ANTICHAIN_BUDGET)]
        budget: u64,
    },
    /// Decide whether a game is strategy-indifferent.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::CoverSum)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = CheckFormat::Text)]
        format: CheckFormat,
    },
    /// Grow a game from a bine of competitors.
    Grow {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MapArg::Phi)]
        map: MapArg,
    },
    /// Extract the bine of competitors of a game.
    Bine { file: PathBuf },
    /// Play a strike-set strategy against every ordering of a game.
    Play {
        file: PathBuf,
        #[arg(long, value_name = "STRIKEFILE")]
        strategy: PathBuf,
    },
    /// Left-to-right-maxima statistics for the pattern classes.
    Stats {
        /// One of sym, av123, av132, av213, av231, av312, av321; omit for the full table.
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = StatsFormat::Csv)]
        format: StatsFormat,
    },
    /// Check the counting identities at rank N.
    Identities {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TreeFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StatsFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    CoverSum,
    ChainPartition,
    BruteForce,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::CoverSum => Method::CoverSum,
            MethodArg::ChainPartition => Method::ChainPartition,
            MethodArg::BruteForce => Method::BruteForce,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MapArg {
    Phi,
    PhiAlt,
}

impl From<MapArg> for GrowthMap {
    fn from(m: MapArg) -> GrowthMap {
        match m {
            MapArg::Phi => GrowthMap::Phi,
            MapArg::PhiAlt => GrowthMap::PhiAlt,
        }
    }
}

enum Failure {
    Lib(Error),
    Io(PathBuf, io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn read_multiset(path: &Path) -> Result<PermMultiset, Failure> {
    PermMultiset::parse(&read(path)?)
        .map_err(|e| match e {
            Error::Parse { line, message } => Error::Parse {
                line,
                message: format!("{}: {message}", path.display()),
            },
            other => other,
        })
        .map_err(Failure::Lib)
}

/// Runs one subcommand; `Ok(false)` means well-formed but verified false.
fn run(cmd: Command, out: &mut impl Write) -> Result<bool, Failure> {
    let w = |out: &mut dyn Write, s: &str| {
        out.write_all(s.as_bytes())
            .map_err(|e| Failure::Io("<stdout>".into(), e))
    };
    match cmd {
        Command::Tree {
            n,
            annotate: file,
            format,
        } => {
            let mut tree = PrefixTree::build(n)?;
            if let Some(f) = file {
                tree = annotate(&tree, &read_multiset(&f)?)?;
            }
            let text = match format {
                TreeFormat::Dot => tree.to_dot(),
                TreeFormat::Json => {
                    serde_json::to_string_pretty(&tree.to_json()).expect("serializable") + "\n"
                }
            };
            w(out, &text)?;
            Ok(true)
        }
        Command::Antichains {
            n,
            count_only,
            budget,
        } => {
            let tree = PrefixTree::build(n)?;
            if count_only {
                w(out, &format!("{}\n", tree.count_maximal_antichains()))?;
            } else {
                for a in tree.maximal_antichains(budget)? {
                    w(out, &format!("{}\n", a.words()))?;
                }
            }
            Ok(true)
        }
        Command::Check {
            file,
            method,
            format,
        } => {
            let game = read_multiset(&file)?;
            let verdict = is_strategy_indifferent(&game, method.into())?;
            match format {
                CheckFormat::Text => w(out, &format!("{verdict}\n"))?,
                CheckFormat::Json => w(out, &format!("{}\n", verdict.to_json()))?,
            }
            Ok(verdict.indifferent)
        }
        Command::Grow { file, map } => {
            let grown = grow_game(&read_multiset(&file)?, map.into())?;
            w(out, &grown.to_text())?;
            Ok(true)
        }
        Command::Bine { file } => {
            let bine = bine_of_competitors(&read_multiset(&file)?)?;
            w(out, &bine.to_text())?;
            Ok(true)
        }
        Command::Play { file, strategy } => {
            let game = read_multiset(&file)?;
            let strike = StrikeSet::parse(&read(&strategy)?)?;
            let mut wins = 0u64;
            for (pi, m) in game.iter() {
                let o = play(pi, &strike);
                if o.won {
                    wins += m;
                }
                let mult = if m > 1 {
                    format!(" * {m}")
                } else {
                    String::new()
                };
                let result = match (o.stop_position, o.selected_value) {
                    (Some(s), Some(v)) => {
                        format!(
                            "stop {s}, value {v}, {}",
                            if o.won { "won" } else { "lost" }
                        )
                    }
                    _ => "never stopped, lost".to_string(),
                };
                w(out, &format!("{}{mult}: {result}\n", pi.to_line()))?;
            }
            if game.is_empty() {
                return Err(Error::EmptyGame.into());
            }
            let p = ExactRational::new(wins, game.cardinality());
            w(
                out,
                &format!(
                    "wins {wins} of {}: {}\n",
                    game.cardinality(),
                    p.display_with_decimal()
                ),
            )?;
            Ok(true)
        }
        Command::Stats { class, n, format } => {
            let rows = match class {
                Some(c) => vec![results_row(c.parse::<ClassLabel>()?, n)?],
                None => results_table(n)?,
            };
            let text = match format {
                StatsFormat::Csv => stats_csv(&rows),
                StatsFormat::Json => {
                    let v: Vec<_> = rows.iter().map(stats_json).collect();
                    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
                }
            };
            w(out, &text)?;
            Ok(true)
        }
        Command::Identities { n } => {
            let lemma = verify_lemma_comb(n)?;
            let eq = verify_eq_321(n)?;
            w(
                out,
                &format!(
                    "lemma_comb N={n}: stirling {} harmonic {} brute-force {} ({})\n",
                    lemma.stirling_side,
                    lemma.harmonic_side,
                    lemma.brute_force,
                    verdict_word(lemma.holds)
                ),
            )?;
            w(
                out,
                &format!(
                    "eq_321 N={n}: lhs {} rhs {} (2N-1)C_(N-1) {} ({})\n",
                    eq.lhs,
                    eq.rhs,
                    eq.catalan_form,
                    verdict_word(eq.holds)
                ),
            )?;
            let prefix: Vec<String> = full_bine_game_sizes(n)
                .iter()
                .map(|x| x.to_string())
                .collect();
            w(out, &format!("A000774 prefix: {}\n", prefix.join(", ")))?;
            Ok(lemma.holds && eq.holds)
        }
    }
}

fn verdict_word(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "FAILS"
    }
}

fn histogram(row: &ResultsRow) -> String {
    row.distribution
        .counts
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn stats_csv(rows: &[ResultsRow]) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record([
        "class",
        "n",
        "cardinality",
        "histogram",
        "e_lrm",
        "e_lrm_decimal",
        "win_probability",
        "win_probability_decimal",
        "asymptote",
    ])
    .expect("in-memory write");
    for r in rows {
        wtr.write_record([
            r.class_label.to_string(),
            r.n.to_string(),
            r.cardinality.to_string(),
            histogram(r),
            r.expected_lrm.to_string(),
            r.expected_lrm.to_decimal(6),
            r.win_probability.to_string(),
            r.win_probability.to_decimal(6),
            r.asymptote.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(wtr.into_inner().expect("flush")).expect("utf-8")
}

fn stats_json(r: &ResultsRow) -> serde_json::Value {
    json!({
        "class": r.class_label,
        "n": r.n,
        "cardinality": r.cardinality.to_string(),
        "histogram": r.distribution.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "e_lrm": r.expected_lrm,
        "e_lrm_decimal": r.expected_lrm.to_decimal(6),
        "win_probability": r.win_probability,
        "win_probability_decimal": r.win_probability.to_decimal(6),
        "asymptote": r.asymptote,
        "printed_forms": r.printed_forms,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::ResourceLimit(_) => 3,
                _ => 2,
            })
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(2)
        }
    }
}
