//! Factored tokens: `surface|factor1|factor2...`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FACTOR_SEPARATOR: char = '|';
/// Placeholder for an absent factor value.
pub const NULL_FACTOR: &str = "null";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenError {
    #[error("empty token")]
    Empty,
    #[error("empty surface in {0:?}")]
    EmptySurface(String),
    #[error("empty factor {index} in {token:?}")]
    EmptyFactor { token: String, index: usize },
    #[error("{0:?} contains whitespace")]
    Whitespace(String),
    #[error("{0:?} contains the factor separator")]
    Separator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FactoredToken {
    surface: String,
    factors: Vec<String>,
}

fn check_piece(piece: &str) -> Result<(), TokenError> {
    if piece.contains(char::is_whitespace) {
        return Err(TokenError::Whitespace(piece.to_owned()));
    }
    if piece.contains(FACTOR_SEPARATOR) {
        return Err(TokenError::Separator(piece.to_owned()));
    }
    Ok(())
}

impl FactoredToken {
    pub fn new<S: Into<String>>(surface: impl Into<String>, factors: impl IntoIterator<Item = S>) -> Result<Self, TokenError> {
        let surface = surface.into();
        let factors: Vec<String> = factors.into_iter().map(Into::into).collect();
        if surface.is_empty() {
            return Err(TokenError::EmptySurface(surface));
        }
        check_piece(&surface)?;
        for (index, f) in factors.iter().enumerate() {
            if f.is_empty() {
                return Err(TokenError::EmptyFactor {
                    token: surface.clone(),
                    index: index + 1,
                });
            }
            check_piece(f)?;
        }
        Ok(FactoredToken { surface, factors })
    }

    pub fn surface_only(surface: impl Into<String>) -> Result<Self, TokenError> {
        Self::new(surface, Vec::<String>::new())
    }

    /// Parses `surface|f1|f2`.
    pub fn parse(s: &str) -> Result<Self, TokenError> {
        if s.is_empty() {
            return Err(TokenError::Empty);
        }
        if s.contains(char::is_whitespace) {
            return Err(TokenError::Whitespace(s.to_owned()));
        }
        let mut pieces = s.split(FACTOR_SEPARATOR);
        let surface = pieces.next().unwrap_or_default();
        if surface.is_empty() {
            return Err(TokenError::EmptySurface(s.to_owned()));
        }
        let factors: Vec<String> = pieces.map(str::to_owned).collect();
        if let Some(index) = factors.iter().position(String::is_empty) {
            return Err(TokenError::EmptyFactor {
                token: s.to_owned(),
                index: index + 1,
            });
        }
        Ok(FactoredToken {
            surface: surface.to_owned(),
            factors,
        })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn factors(&self) -> &[String] {
        &self.factors
    }

    /// Number of factors, not counting the surface.
    pub fn width(&self) -> usize {
        self.factors.len()
    }

    /// Piece by position: 0 is the surface, 1.. the factors.
    pub fn piece(&self, index: usize) -> Option<&str> {
        if index == 0 {
            Some(&self.surface)
        } else {
            self.factors.get(index - 1).map(String::as_str)
        }
    }

    /// Pads with `null` factors up to `width`.
    pub(crate) fn padded(&self, width: usize) -> Self {
        let mut t = self.clone();
        t.factors.resize(width.max(t.factors.len()), NULL_FACTOR.to_owned());
        t
    }

    pub fn without_factors(&self) -> Self {
        FactoredToken {
            surface: self.surface.clone(),
            factors: Vec::new(),
        }
    }
}

impl fmt::Display for FactoredToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surface)?;
        for factor in &self.factors {
            write!(f, "{FACTOR_SEPARATOR}{factor}")?;
        }
        Ok(())
    }
}

/// Space-joined tokens, as one corpus line.
pub fn join_line(tokens: &[FactoredToken]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&t.to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table_layout() {
        let t = FactoredToken::parse("कुत्ता|कुत्ता|null").unwrap();
        assert_eq!(t.surface(), "कुत्ता");
        assert_eq!(t.factors(), ["कुत्ता", "null"]);
        assert_eq!(t.piece(2), Some("null"));
        assert_eq!(t.to_string(), "कुत्ता|कुत्ता|null");
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!(FactoredToken::parse(""), Err(TokenError::Empty));
        assert!(matches!(FactoredToken::parse("|a"), Err(TokenError::EmptySurface(_))));
        assert!(matches!(FactoredToken::parse("a||b"), Err(TokenError::EmptyFactor { index: 1, .. })));
        assert!(matches!(FactoredToken::parse("a|b|"), Err(TokenError::EmptyFactor { index: 2, .. })));
        assert!(matches!(FactoredToken::new("a b", ["x"]), Err(TokenError::Whitespace(_))));
        assert!(matches!(FactoredToken::new("a", ["x|y"]), Err(TokenError::Separator(_))));
    }

    #[test]
    fn pads() {
        let t = FactoredToken::surface_only("dog").unwrap().padded(3);
        assert_eq!(t.to_string(), "dog|null|null|null");
    }
}
