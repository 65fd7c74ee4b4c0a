//! Group-string grammar:
//!
//! ```text
//! group := "free(" N ")" | "abelian(" N ")" | "cyclic(" N ")"
//!        | "dihedral_inf" | "lamplighter(" N ")"
//!        | "free_product(" group "," group ")"
//!        | "direct(" group "," group ")"
//! ```
//!
//! Whitespace between tokens is ignored.

use std::str::FromStr;

use super::GroupSpec;
use crate::error::{Error, Result};

struct Parser<'a> {
    input: &'a str,
    rest: &'a str,
}

impl<'a> Parser<'a> {
    fn fail<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            input: self.input.to_string(),
            reason: reason.into(),
        })
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start();
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        match self.rest.strip_prefix(c) {
            Some(rest) => {
                self.rest = rest;
                Ok(())
            }
            None => self.fail(format!("expected `{c}` at {:?}", self.rest)),
        }
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let end = self
            .rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest.len());
        let (ident, rest) = self.rest.split_at(end);
        self.rest = rest;
        ident
    }

    fn number(&mut self) -> Result<u32> {
        self.expect('(')?;
        self.skip_ws();
        let end = self
            .rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest.len());
        let (digits, rest) = self.rest.split_at(end);
        let Ok(value) = digits.parse::<u32>() else {
            return self.fail(format!("expected a number at {:?}", self.rest));
        };
        self.rest = rest;
        self.expect(')')?;
        Ok(value)
    }

    fn pair(&mut self) -> Result<(GroupSpec, GroupSpec)> {
        self.expect('(')?;
        let left = self.group()?;
        self.expect(',')?;
        let right = self.group()?;
        self.expect(')')?;
        Ok((left, right))
    }

    fn group(&mut self) -> Result<GroupSpec> {
        let spec = match self.ident() {
            "free" => GroupSpec::Free(self.number()?),
            "abelian" => GroupSpec::FreeAbelian(self.number()?),
            "cyclic" => GroupSpec::Cyclic(self.number()?),
            "lamplighter" => GroupSpec::Lamplighter(self.number()?),
            "dihedral_inf" => GroupSpec::InfiniteDihedral,
            "free_product" => {
                let (l, r) = self.pair()?;
                GroupSpec::free_product(l, r)
            }
            "direct" => {
                let (l, r) = self.pair()?;
                GroupSpec::direct(l, r)
            }
            "" => return self.fail(format!("expected a group at {:?}", self.rest)),
            other => return self.fail(format!("unknown group family `{other}`")),
        };
        Ok(spec)
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = Parser { input: s, rest: s };
        let spec = parser.group()?;
        parser.skip_ws();
        if !parser.rest.is_empty() {
            return parser.fail(format!("trailing input {:?}", parser.rest));
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_family() {
        let cases = [
            ("free(2)", GroupSpec::Free(2)),
            ("abelian(2)", GroupSpec::FreeAbelian(2)),
            ("cyclic(3)", GroupSpec::Cyclic(3)),
            ("dihedral_inf", GroupSpec::InfiniteDihedral),
            ("lamplighter(2)", GroupSpec::Lamplighter(2)),
            (
                " free_product( abelian(2) , free(1) ) ",
                GroupSpec::free_product(GroupSpec::FreeAbelian(2), GroupSpec::Free(1)),
            ),
            (
                "direct(free(2),cyclic(3))",
                GroupSpec::direct(GroupSpec::Free(2), GroupSpec::Cyclic(3)),
            ),
        ];
        for (text, expected) in cases {
            let spec: GroupSpec = text.parse().unwrap();
            assert_eq!(spec, expected);
            assert_eq!(spec.to_string().parse::<GroupSpec>().unwrap(), spec);
        }
    }

    #[test]
    fn rejects_malformed_strings() {
        for bad in [
            "",
            "free",
            "free(",
            "free(x)",
            "free(2",
            "free(2))",
            "torus(2)",
            "direct(free(2))",
            "free_product(free(1),)",
        ] {
            assert!(
                matches!(bad.parse::<GroupSpec>(), Err(Error::Parse { .. })),
                "{bad:?} parsed"
            );
        }
    }

    #[test]
    fn rejects_invalid_parameters() {
        for bad in ["free(0)", "abelian(0)", "cyclic(1)", "lamplighter(1)", "direct(free(1),cyclic(0))"] {
            assert!(matches!(bad.parse::<GroupSpec>(), Err(Error::InvalidSpec(_))), "{bad}");
        }
    }
}
