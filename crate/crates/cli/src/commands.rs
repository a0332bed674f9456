use std::io::{BufRead, Write};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use pa2_core::engine::{
    exh_verdict, minimax, run_play, transcript_of, Budget, RandomOracle, StallPolicy,
};
use pa2_core::games::{Game, ParamAssignment};
use pa2_core::logic::{Registry, Sequent};
use pa2_core::parser::{parse_corpus, parse_formula, parse_sequent, render_sequent};
use pa2_core::semantics::{eval_truth, interpret_formula, interpret_sequent, Environment};
use pa2_core::strategy::ExhStrategy;
use pa2_core::suites::Suite;

use crate::interactive::PromptOracle;

pub const SUCCESS: u8 = 0;
pub const FAILURE: u8 = 1;
pub const USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "pa2", version, about = "Game semantics for second-order arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Echo the normalized rendering of each sequent in a corpus, or its syntax error.
    Parse {
        /// Corpus file, or `-` for standard input.
        input: String,
    },
    /// Evaluate a closed formula, checking universal instances up to the budget.
    Eval {
        #[arg(long, default_value_t = 100)]
        budget: u64,
        /// Formula text, or `-` for standard input.
        formula: String,
    },
    /// Print the game of a formula (or, with --sequent, of a sequent) as JSON.
    Dump {
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 4)]
        branch: usize,
        /// Interpret the input as a sequent rather than a single formula.
        #[arg(long)]
        sequent: bool,
        input: String,
    },
    /// Play EXH as Player against an Opponent source.
    Play {
        /// The side controlled by the chosen source; only Opponent is supported.
        #[arg(long = "as", value_enum, default_value_t = Side::O)]
        side: Side,
        /// Random Opponent (the default).
        #[arg(long, conflicts_with = "stdin")]
        random: bool,
        /// Read Opponent moves from standard input.
        #[arg(long)]
        stdin: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        max_moves: usize,
        /// Moves considered by the random Opponent at each turn.
        #[arg(long, default_value_t = 16)]
        max_branch: usize,
        sequent: String,
    },
    /// Run EXH exhaustively, then cross-check with minimax.
    Solve {
        #[arg(long, default_value_t = 2_000_000)]
        max_nodes: usize,
        #[arg(long, default_value_t = 200)]
        max_moves: usize,
        #[arg(long, default_value_t = 16)]
        max_branch: usize,
        sequent: String,
    },
    /// Run an acceptance suite, or all of them.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Number of random cases; each suite has its own default.
        #[arg(long)]
        count: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Side {
    O,
}

fn read_arg(arg: &str, stdin: &mut dyn BufRead) -> Result<String> {
    if arg != "-" {
        return Ok(arg.to_string());
    }
    let mut text = String::new();
    stdin.read_to_string(&mut text).context("reading standard input")?;
    Ok(text)
}

fn sequent_of(text: &str, reg: &Registry) -> Result<Sequent> {
    parse_sequent(text.trim(), reg).map_err(|e| anyhow::anyhow!("{e}"))
}

/// The game to play for a sequent. A lone formula whose game is already
/// a ∀Game is played directly.
fn host_game(s: &Sequent, reg: &Registry) -> Result<Game> {
    if let [f] = s.formulas.as_slice() {
        let g = interpret_formula(f, reg)?;
        if g.forall_position().is_some() && g.scope().is_empty() {
            return Ok(g);
        }
    }
    Ok(interpret_sequent(s, reg)?)
}

pub fn run(cli: Cli, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<u8> {
    let reg = Registry::standard();
    match cli.command {
        Command::Parse { input } => {
            let text = if input == "-" {
                read_arg("-", stdin)?
            } else {
                std::fs::read_to_string(&input).with_context(|| format!("reading {input}"))?
            };
            let mut code = SUCCESS;
            for (line, parsed) in parse_corpus(&text, &reg) {
                match parsed {
                    Ok(s) => writeln!(out, "{}", render_sequent(&s))?,
                    Err(e) => {
                        writeln!(out, "line {line}: {e}")?;
                        code = FAILURE;
                    }
                }
            }
            Ok(code)
        }
        Command::Eval { budget, formula } => {
            let text = read_arg(&formula, stdin)?;
            let f = parse_formula(text.trim(), &reg).map_err(|e| anyhow::anyhow!("{e}"))?;
            writeln!(out, "{}", eval_truth(&f, &Environment::empty(), budget, &reg)?)?;
            Ok(SUCCESS)
        }
        Command::Dump { depth, branch, sequent, input } => {
            let text = read_arg(&input, stdin)?;
            let game = if sequent {
                interpret_sequent(&sequent_of(&text, &reg)?, &reg)?
            } else {
                let f = parse_formula(text.trim(), &reg).map_err(|e| anyhow::anyhow!("{e}"))?;
                interpret_formula(&f, &reg)?
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&game.dump(depth, branch))?)?;
            Ok(SUCCESS)
        }
        Command::Play { side: Side::O, random: _, stdin: interactive, seed, max_moves, max_branch, sequent } => {
            let text = read_arg(&sequent, stdin)?;
            let game = host_game(&sequent_of(&text, &reg)?, &reg)?;
            let mut player = ExhStrategy::new(&game)?;
            let budget = Budget::default().with_moves(max_moves);
            let rho = ParamAssignment::empty();
            let transcript = if interactive {
                let mut opponent = PromptOracle::new(stdin, out);
                run_play(&game, &mut player, &mut opponent, &rho, budget, StallPolicy::BudgetExhausted)?
            } else {
                let mut opponent = RandomOracle::new(seed, max_branch);
                run_play(&game, &mut player, &mut opponent, &rho, budget, StallPolicy::BudgetExhausted)?
            };
            writeln!(out, "{transcript}")?;
            Ok(SUCCESS)
        }
        Command::Solve { max_nodes, max_moves, max_branch, sequent } => {
            let text = read_arg(&sequent, stdin)?;
            let game = host_game(&sequent_of(&text, &reg)?, &reg)?;
            let budget = Budget { max_moves, max_branch, max_nodes };
            let report = exh_verdict(&game, budget)?;
            writeln!(out, "{}", report.verdict)?;
            let rho = ParamAssignment::empty();
            if let Some(play) = report.representative() {
                writeln!(out, "{}", transcript_of(&game, play.history(), &rho)?)?;
            }
            writeln!(out, "explored {} plays, {} nodes", report.plays.len(), report.nodes)?;
            let check = minimax(&game, &rho, budget);
            writeln!(out, "minimax: {} ({} nodes)", check.verdict, check.nodes)?;
            let disagree = report.verdict.is_definite()
                && check.verdict.is_definite()
                && report.verdict != check.verdict;
            if disagree {
                writeln!(out, "verdicts disagree")?;
                return Ok(FAILURE);
            }
            Ok(SUCCESS)
        }
        Command::Verify { suite, seed, count } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                match Suite::from_name(&suite) {
                    Some(s) => vec![s],
                    None => {
                        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                        bail!("unknown suite {suite}; expected all or one of {}", names.join(", "));
                    }
                }
            };
            let mut code = SUCCESS;
            for s in suites {
                let report = s.run(seed, count.unwrap_or(s.default_count()));
                writeln!(out, "{report}")?;
                if !report.passed() {
                    code = FAILURE;
                }
            }
            Ok(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str], input: &str) -> (u8, String) {
        let cli = Cli::try_parse_from(std::iter::once("pa2").chain(args.iter().copied())).unwrap();
        let mut out = Vec::new();
        let code = run(cli, &mut input.as_bytes(), &mut out).unwrap();
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn eval_finds_witness() {
        assert_eq!(run_args(&["eval", "--budget", "10", "exists x. x+2=5"], ""), (0, "True\n".into()));
    }

    #[test]
    fn solve_excluded_middle() {
        let (code, out) = run_args(&["solve", "Forall X:1. X(0) | ~X(0)"], "");
        assert_eq!(code, 0);
        assert!(out.starts_with("PlayerWinning\n"), "{out}");
        assert!(out.contains("EM(1,2)\nPlayerWins(Em)"), "{out}");
    }

    #[test]
    fn player_is_not_selectable() {
        assert!(Cli::try_parse_from(["pa2", "play", "--as", "P", "True"]).is_err());
    }
}
