//! The move language and its numeric encoding.
//!
//! A move is encoded as `tag + 5 * payload`, with tags `DROP = 0`, `EM = 1`,
//! `STOP = 2`, `JUST = 3`, `NTH = 4`. Unary moves use their argument as
//! payload, binary moves the Cantor pairing of their two arguments. Every
//! `u64` decodes to exactly one move.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    /// Player gives up; the argument is the current number of local positions.
    Drop(u64),
    /// Excluded middle on local positions `i`, `j`.
    Em(u64, u64),
    /// The atomic local position `i` decides the play.
    Stop(u64),
    /// Local position `i` justifies the new local position `n`.
    Just(u64, u64),
    /// Select the immediate sub-game number `n`.
    Nth(u64),
}

pub const TAG_DROP: u64 = 0;
pub const TAG_EM: u64 = 1;
pub const TAG_STOP: u64 = 2;
pub const TAG_JUST: u64 = 3;
pub const TAG_NTH: u64 = 4;

/// Cantor pairing `π(i, j) = (i + j)(i + j + 1) / 2 + j`, or `None` on overflow.
pub fn cantor_pair(i: u64, j: u64) -> Option<u64> {
    let s = i.checked_add(j)?;
    let tri = if s % 2 == 0 {
        (s / 2).checked_mul(s.checked_add(1)?)?
    } else {
        s.checked_mul(s / 2 + 1)?
    };
    tri.checked_add(j)
}

pub fn cantor_unpair(z: u64) -> (u64, u64) {
    // Largest w with w(w+1)/2 <= z.
    let mut w = ((((8 * z as u128) + 1) as f64).sqrt() as u64).saturating_sub(1) / 2;
    let tri = |w: u64| (w as u128) * (w as u128 + 1) / 2;
    while tri(w + 1) <= z as u128 {
        w += 1;
    }
    while tri(w) > z as u128 {
        w -= 1;
    }
    let j = (z as u128 - tri(w)) as u64;
    (w - j, j)
}

impl Move {
    pub fn tag(&self) -> u64 {
        match self {
            Move::Drop(_) => TAG_DROP,
            Move::Em(..) => TAG_EM,
            Move::Stop(_) => TAG_STOP,
            Move::Just(..) => TAG_JUST,
            Move::Nth(_) => TAG_NTH,
        }
    }

    /// The payload, exact as `u128` for every unary move and for binary
    /// moves whose arguments sum below `2^63`; larger pairs saturate, which
    /// still orders them after every unary payload.
    fn payload_wide(&self) -> u128 {
        match *self {
            Move::Drop(n) | Move::Stop(n) | Move::Nth(n) => n as u128,
            Move::Em(i, j) | Move::Just(i, j) => {
                let s = i as u128 + j as u128;
                match s.checked_mul(s + 1) {
                    Some(p) => p / 2 + j as u128,
                    None => u128::MAX,
                }
            }
        }
    }

    fn args(&self) -> (u64, u64) {
        match *self {
            Move::Drop(n) | Move::Stop(n) | Move::Nth(n) => (n, 0),
            Move::Em(i, j) | Move::Just(i, j) => (i, j),
        }
    }

    /// Numeric code, if it fits in a `u64`.
    pub fn checked_encode(&self) -> Option<u64> {
        let payload = match *self {
            Move::Drop(n) | Move::Stop(n) | Move::Nth(n) => n,
            Move::Em(i, j) | Move::Just(i, j) => cantor_pair(i, j)?,
        };
        payload.checked_mul(5)?.checked_add(self.tag())
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, Move::Drop(_) | Move::Em(..) | Move::Stop(_))
    }
}

/// # Panics
///
/// If the code of `m` does not fit in a `u64` (arguments around `2^31` and
/// beyond for binary moves).
pub fn encode_move(m: &Move) -> u64 {
    m.checked_encode()
        .unwrap_or_else(|| panic!("code of {m} does not fit in 64 bits"))
}

pub fn decode_move(n: u64) -> Move {
    let payload = n / 5;
    match n % 5 {
        TAG_DROP => Move::Drop(payload),
        TAG_EM => {
            let (i, j) = cantor_unpair(payload);
            Move::Em(i, j)
        }
        TAG_STOP => Move::Stop(payload),
        TAG_JUST => {
            let (i, j) = cantor_unpair(payload);
            Move::Just(i, j)
        }
        _ => Move::Nth(payload),
    }
}

/// Moves are ordered by their numeric code.
impl Ord for Move {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.payload_wide(), self.tag())
            .cmp(&(other.payload_wide(), other.tag()))
            .then_with(|| self.args().cmp(&other.args()))
    }
}

impl PartialOrd for Move {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Drop(n) => write!(f, "DROP({n})"),
            Move::Em(i, j) => write!(f, "EM({i},{j})"),
            Move::Stop(i) => write!(f, "STOP({i})"),
            Move::Just(i, n) => write!(f, "JUST({i},{n})"),
            Move::Nth(n) => write!(f, "NTH({n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot read `{0}` as a move (expected a code or e.g. `JUST(0,1)`)")]
pub struct MoveSyntaxError(pub String);

/// Accepts either a numeric code or the rendered form (`NTH(2)`, `em(1, 2)`).
impl FromStr for Move {
    type Err = MoveSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Ok(n) = t.parse::<u64>() {
            return Ok(decode_move(n));
        }
        let err = || MoveSyntaxError(s.to_string());
        let open = t.find('(').ok_or_else(err)?;
        let inner = t[open + 1..].strip_suffix(')').ok_or_else(err)?;
        let args: Vec<u64> = inner
            .split(',')
            .map(|a| a.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| err())?;
        match (t[..open].trim().to_ascii_uppercase().as_str(), args.as_slice()) {
            ("DROP", [n]) => Ok(Move::Drop(*n)),
            ("EM", [i, j]) => Ok(Move::Em(*i, *j)),
            ("STOP", [i]) => Ok(Move::Stop(*i)),
            ("JUST", [i, n]) => Ok(Move::Just(*i, *n)),
            ("NTH", [n]) => Ok(Move::Nth(*n)),
            _ => Err(err()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fixed_codes() {
        assert_eq!(encode_move(&Move::Drop(0)), 0);
        assert_eq!(encode_move(&Move::Nth(1)), 9);
        assert_eq!(encode_move(&Move::Nth(2)), 14);
        // π(0,1) = 2, so JUST(0,1) = 3 + 5·2.
        assert_eq!(encode_move(&Move::Just(0, 1)), 13);
        // π(1,2) = 8, so EM(1,2) = 1 + 5·8.
        assert_eq!(encode_move(&Move::Em(1, 2)), 41);
    }

    #[test]
    fn cantor_matches_enumeration_of_diagonals() {
        let mut z = 0u64;
        for s in 0..60u64 {
            for j in 0..=s {
                assert_eq!(cantor_pair(s - j, j), Some(z));
                assert_eq!(cantor_unpair(z), (s - j, j));
                z += 1;
            }
        }
    }

    #[test]
    fn parse_rendered_and_numeric() {
        assert_eq!("JUST(0,1)".parse::<Move>().unwrap(), Move::Just(0, 1));
        assert_eq!("em(1, 2)".parse::<Move>().unwrap(), Move::Em(1, 2));
        assert_eq!("9".parse::<Move>().unwrap(), Move::Nth(1));
        assert!("JUMP(1)".parse::<Move>().is_err());
        assert!("NTH(1,2)".parse::<Move>().is_err());
    }

    fn any_move() -> impl Strategy<Value = Move> {
        prop_oneof![
            (0u64..1000).prop_map(Move::Drop),
            (0u64..1000, 0u64..1000).prop_map(|(i, j)| Move::Em(i, j)),
            (0u64..1000).prop_map(Move::Stop),
            (0u64..1000, 0u64..1000).prop_map(|(i, j)| Move::Just(i, j)),
            (0u64..1000).prop_map(Move::Nth),
        ]
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(m in any_move()) {
            prop_assert_eq!(decode_move(encode_move(&m)), m);
        }

        #[test]
        fn encode_inverts_decode(n in any::<u64>()) {
            let m = decode_move(n);
            prop_assert_eq!(m.checked_encode(), Some(n));
        }

        #[test]
        fn order_agrees_with_codes(a in any_move(), b in any_move()) {
            prop_assert_eq!(a.cmp(&b), encode_move(&a).cmp(&encode_move(&b)));
        }

        #[test]
        fn display_parses_back(m in any_move()) {
            prop_assert_eq!(m.to_string().parse::<Move>().unwrap(), m);
        }
    }
}
