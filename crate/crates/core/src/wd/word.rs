use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One generator power in a Weil-group word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    /// `phi^k` for the chosen Frobenius lift.
    Phi(i64),
    /// `(inertia generator j)^k`, 0-based.
    Inertia(usize, i64),
}

/// A word in the Frobenius lift and the inertia generators.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeilWord {
    pub letters: Vec<Letter>,
}

impl WeilWord {
    pub fn empty() -> Self {
        WeilWord::default()
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        WeilWord { letters }
    }

    pub fn phi(k: i64) -> Self {
        WeilWord::new(vec![Letter::Phi(k)])
    }

    pub fn inertia(j: usize, k: i64) -> Self {
        WeilWord::new(vec![Letter::Inertia(j, k)])
    }

    /// Valuation: the total power of Frobenius.
    pub fn v_k(&self) -> i64 {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::Phi(k) => *k,
                Letter::Inertia(..) => 0,
            })
            .sum()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, o: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(o.letters.iter().copied());
        WeilWord { letters }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend(self.letters.iter().copied());
        }
        WeilWord { letters }
    }

    /// Parse `phi^2 * I0^-1 * phi`; `1` or the empty string is the identity.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() || t == "1" {
            return Ok(Self::empty());
        }
        let mut letters = Vec::new();
        for raw in t.split(|c: char| c == '*' || c.is_whitespace()) {
            if raw.is_empty() {
                continue;
            }
            let (base, exp) = match raw.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<i64>()
                        .map_err(|_| Error::InvalidDatum(format!("bad exponent in '{raw}'")))?,
                ),
                None => (raw, 1),
            };
            let letter = if base == "phi" {
                Letter::Phi(exp)
            } else if let Some(j) = base.strip_prefix('I') {
                let j = j
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidDatum(format!("bad inertia index in '{raw}'")))?;
                Letter::Inertia(j, exp)
            } else {
                return Err(Error::InvalidDatum(format!("unknown letter '{raw}'")));
            };
            letters.push(letter);
        }
        Ok(WeilWord { letters })
    }
}

impl fmt::Display for WeilWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| match l {
                Letter::Phi(1) => "phi".to_string(),
                Letter::Phi(k) => format!("phi^{k}"),
                Letter::Inertia(j, 1) => format!("I{j}"),
                Letter::Inertia(j, k) => format!("I{j}^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}
