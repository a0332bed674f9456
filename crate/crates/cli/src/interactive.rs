//! An Opponent oracle that reads moves from a terminal.

use std::io::{BufRead, Write};

use pa2_core::games::{encode_move, Game, Move};
use pa2_core::strategy::{MoveOracle, StrategyError};

/// How many legal moves to list per prompt.
const SHOWN: usize = 12;

pub struct PromptOracle<'a> {
    input: &'a mut dyn BufRead,
    output: &'a mut dyn Write,
}

impl<'a> PromptOracle<'a> {
    pub fn new(input: &'a mut dyn BufRead, output: &'a mut dyn Write) -> Self {
        PromptOracle { input, output }
    }

    fn say(&mut self, text: &str) -> Result<(), StrategyError> {
        writeln!(self.output, "{text}").map_err(|e| StrategyError::Inconsistent(e.to_string()))
    }

    fn options(game: &Game) -> String {
        let mut shown: Vec<String> = game.moves().take(SHOWN + 1).map(|m| format!("{m} [{}]", encode_move(&m))).collect();
        if shown.len() > SHOWN {
            shown.truncate(SHOWN);
            shown.push("...".into());
        }
        shown.join(", ")
    }
}

impl MoveOracle for PromptOracle<'_> {
    fn name(&self) -> String {
        "stdin".into()
    }

    /// Returns `None` at end of input.
    fn choose(&mut self, game: &Game, history: &[Move]) -> Result<Option<Move>, StrategyError> {
        if let Some(pos) = game.forall_position() {
            if let Some(i) = pos.pending() {
                self.say(&format!("local {i} awaits your reply"))?;
            }
        }
        loop {
            let listing = format!("move {}; legal: {}", history.len() + 1, Self::options(game));
            self.say(&listing)?;
            write!(self.output, "O> ").and_then(|_| self.output.flush())
                .map_err(|e| StrategyError::Inconsistent(e.to_string()))?;
            let mut line = String::new();
            let read = self.input.read_line(&mut line).map_err(|e| StrategyError::Inconsistent(e.to_string()))?;
            if read == 0 {
                self.say("")?;
                return Ok(None);
            }
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            let m = match text.parse::<Move>() {
                Ok(m) => m,
                Err(e) => {
                    self.say(&format!("rejected: {e}"))?;
                    continue;
                }
            };
            match game.play(&m) {
                Ok(_) => return Ok(Some(m)),
                Err(e) => self.say(&format!("rejected: {e}"))?,
            }
        }
    }
}
