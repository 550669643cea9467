//! Textual state specifications.
//!
//! ```text
//! spec   := coherent(NUM) | thermal(NUM) | number(INT)
//!         | squeezed(R=NUM, r=NUM)
//!         | squeezed_target(mean=NUM, var=NUM [, branch=strong|weak])
//!         | mix(NUM; spec; spec)
//! ```
//!
//! Whitespace is allowed between tokens. Keyed arguments may come in any
//! order. The [`Display`](fmt::Display) form is canonical and parses back to
//! the same value.

use std::fmt;

use photostat::{
    coherent_distribution, mixture, number_state_distribution, solve_squeezed_params_on,
    squeezed_distribution, thermal_distribution, MixtureSpec, PhotonDistribution, SqueezeBranch,
    SqueezedParams,
};

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Coherent { mean: f64 },
    Thermal { mean: f64 },
    Number { n: u64 },
    Squeezed { displacement: f64, squeezing: f64 },
    SqueezedTarget { mean: f64, variance: f64, branch: SqueezeBranch },
    Mix { weight: f64, first: Box<StateSpec>, second: Box<StateSpec> },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unknown state family '{0}' (expected coherent, thermal, number, squeezed, squeezed_target or mix)")]
    UnknownFamily(String),
    #[error("{family} takes {expected} argument(s), found {found}")]
    Arity { family: &'static str, expected: &'static str, found: usize },
    #[error("mixing weight {0} is outside [0, 1]")]
    WeightOutOfRange(f64),
    #[error("malformed number '{0}'")]
    MalformedNumber(String),
    #[error("photon number must be a non-negative integer, got '{0}'")]
    BadCount(String),
    #[error("unknown key '{key}' for {family}")]
    UnknownKey { family: &'static str, key: String },
    #[error("missing key '{key}' for {family}")]
    MissingKey { family: &'static str, key: &'static str },
    #[error("key '{0}' given twice")]
    DuplicateKey(String),
    #[error("unknown branch '{0}' (expected strong or weak)")]
    UnknownBranch(String),
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unexpected trailing input")]
    TrailingInput,
}

/// A parse failure at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    /// The input with a caret under the failing byte.
    pub fn render(&self, input: &str) -> String {
        format!("{self}\n  {input}\n  {}^", " ".repeat(self.offset.min(input.len())))
    }
}

type PResult<T> = std::result::Result<T, ParseError>;

impl std::str::FromStr for StateSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> PResult<Self> {
        parse_state_spec(s)
    }
}

pub fn parse_state_spec(input: &str) -> PResult<StateSpec> {
    let mut p = Parser { src: input, pos: 0 };
    let spec = p.spec()?;
    p.skip_ws();
    if p.pos != input.len() {
        return Err(p.error_here(ParseErrorKind::TrailingInput));
    }
    Ok(spec)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

/// One raw argument: its start offset, optional key and value text.
struct Arg<'a> {
    offset: usize,
    key: Option<&'a str>,
    value: &'a str,
    value_offset: usize,
}

impl<'a> Parser<'a> {
    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { offset: self.pos, kind }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, byte: u8, what: &'static str) -> PResult<()> {
        self.skip_ws();
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here(ParseErrorKind::Expected(what)))
        }
    }

    fn ident(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_') {
            self.pos += 1;
        }
        (start, &self.src[start..self.pos])
    }

    fn spec(&mut self) -> PResult<StateSpec> {
        let (start, name) = self.ident();
        if name.is_empty() {
            return Err(self.error_here(ParseErrorKind::Expected("a state family name")));
        }
        let family: &'static str = match name {
            "coherent" => "coherent",
            "thermal" => "thermal",
            "number" => "number",
            "squeezed" => "squeezed",
            "squeezed_target" => "squeezed_target",
            "mix" => "mix",
            other => {
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::UnknownFamily(other.to_string()),
                })
            }
        };
        self.expect(b'(', "'('")?;
        let open = self.pos;
        let spec = if family == "mix" { self.mix(open)? } else { self.simple(family, open)? };
        self.expect(b')', "')'")?;
        Ok(spec)
    }

    fn mix(&mut self, open: usize) -> PResult<StateSpec> {
        self.skip_ws();
        let weight_at = self.pos;
        let raw = self.take_until(|b| b == b';' || b == b')');
        let weight = number(raw, weight_at)?;
        if !(0.0..=1.0).contains(&weight) {
            return Err(ParseError {
                offset: weight_at,
                kind: ParseErrorKind::WeightOutOfRange(weight),
            });
        }
        let mut parts = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b';') => {
                    self.pos += 1;
                    parts.push(self.spec()?);
                }
                _ => break,
            }
        }
        if parts.len() != 2 {
            return Err(ParseError {
                offset: open,
                kind: ParseErrorKind::Arity {
                    family: "mix",
                    expected: "3 (weight; spec; spec)",
                    found: parts.len() + 1,
                },
            });
        }
        let second = parts.pop().expect("two parts");
        let first = parts.pop().expect("two parts");
        Ok(StateSpec::Mix {
            weight,
            first: Box::new(first),
            second: Box::new(second),
        })
    }

    fn take_until(&mut self, stop: impl Fn(u8) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|b| !stop(b)) {
            self.pos += 1;
        }
        self.src[start..self.pos].trim_end()
    }

    fn args(&mut self) -> PResult<Vec<Arg<'a>>> {
        let mut args = Vec::new();
        self.skip_ws();
        if self.peek() == Some(b')') {
            return Ok(args);
        }
        loop {
            self.skip_ws();
            let offset = self.pos;
            let raw = self.take_until(|b| b == b',' || b == b')' || b == b'(' || b == b';');
            if raw.is_empty() && self.peek().is_none() {
                return Err(self.error_here(ParseErrorKind::Expected("an argument")));
            }
            let (key, value, value_offset) = match raw.find('=') {
                Some(i) => {
                    let value = raw[i + 1..].trim_start();
                    let value_offset = offset + raw.len() - value.len();
                    (Some(raw[..i].trim()), value, value_offset)
                }
                None => (None, raw, offset),
            };
            args.push(Arg { offset, key, value, value_offset });
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => break,
                _ => return Err(self.error_here(ParseErrorKind::Expected("',' or ')'"))),
            }
        }
        Ok(args)
    }

    fn simple(&mut self, family: &'static str, open: usize) -> PResult<StateSpec> {
        let args = self.args()?;
        let arity = |expected: &'static str| ParseError {
            offset: open,
            kind: ParseErrorKind::Arity { family, expected, found: args.len() },
        };
        match family {
            "coherent" | "thermal" | "number" => {
                if args.len() != 1 {
                    return Err(arity("1"));
                }
                let arg = &args[0];
                if let Some(key) = arg.key {
                    return Err(ParseError {
                        offset: arg.offset,
                        kind: ParseErrorKind::UnknownKey { family, key: key.to_string() },
                    });
                }
                Ok(match family {
                    "coherent" => StateSpec::Coherent { mean: number(arg.value, arg.value_offset)? },
                    "thermal" => StateSpec::Thermal { mean: number(arg.value, arg.value_offset)? },
                    _ => StateSpec::Number { n: count(arg.value, arg.value_offset)? },
                })
            }
            "squeezed" => {
                if args.len() != 2 {
                    return Err(arity("2 (R=, r=)"));
                }
                let mut keyed = Keyed::new(family, &args, &["R", "r"])?;
                Ok(StateSpec::Squeezed {
                    displacement: keyed.number("R", open)?,
                    squeezing: keyed.number("r", open)?,
                })
            }
            _ => {
                if !(2..=3).contains(&args.len()) {
                    return Err(arity("2 or 3 (mean=, var= [, branch=])"));
                }
                let mut keyed = Keyed::new(family, &args, &["mean", "var", "branch"])?;
                let branch = match keyed.take("branch") {
                    None => SqueezeBranch::default(),
                    Some(arg) => match arg.value {
                        "strong" => SqueezeBranch::Strong,
                        "weak" => SqueezeBranch::Weak,
                        other => {
                            return Err(ParseError {
                                offset: arg.value_offset,
                                kind: ParseErrorKind::UnknownBranch(other.to_string()),
                            })
                        }
                    },
                };
                Ok(StateSpec::SqueezedTarget {
                    mean: keyed.number("mean", open)?,
                    variance: keyed.number("var", open)?,
                    branch,
                })
            }
        }
    }
}

/// Keyed arguments, checked for unknown and duplicate keys.
struct Keyed<'s, 'a> {
    family: &'static str,
    args: Vec<Option<&'s Arg<'a>>>,
}

impl<'s, 'a> Keyed<'s, 'a> {
    fn new(family: &'static str, args: &'s [Arg<'a>], allowed: &[&str]) -> PResult<Self> {
        for (i, arg) in args.iter().enumerate() {
            let Some(key) = arg.key else {
                return Err(ParseError {
                    offset: arg.offset,
                    kind: ParseErrorKind::Expected("a keyed argument like key=value"),
                });
            };
            if !allowed.contains(&key) {
                return Err(ParseError {
                    offset: arg.offset,
                    kind: ParseErrorKind::UnknownKey { family, key: key.to_string() },
                });
            }
            if args[..i].iter().any(|a| a.key == Some(key)) {
                return Err(ParseError {
                    offset: arg.offset,
                    kind: ParseErrorKind::DuplicateKey(key.to_string()),
                });
            }
        }
        Ok(Self { family, args: args.iter().map(Some).collect() })
    }

    fn take(&mut self, key: &str) -> Option<&'s Arg<'a>> {
        self.args.iter_mut().find(|a| a.is_some_and(|a| a.key == Some(key)))?.take()
    }

    fn number(&mut self, key: &'static str, open: usize) -> PResult<f64> {
        match self.take(key) {
            Some(arg) => number(arg.value, arg.value_offset),
            None => Err(ParseError {
                offset: open,
                kind: ParseErrorKind::MissingKey { family: self.family, key },
            }),
        }
    }
}

fn number(text: &str, offset: usize) -> PResult<f64> {
    let malformed = || ParseError {
        offset,
        kind: ParseErrorKind::MalformedNumber(text.to_string()),
    };
    // Only plain decimal notation; rules out "inf", "NaN" and friends.
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b)) {
        return Err(malformed());
    }
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(malformed()),
    }
}

fn count(text: &str, offset: usize) -> PResult<u64> {
    text.parse::<u64>().map_err(|_| ParseError {
        offset,
        kind: ParseErrorKind::BadCount(text.to_string()),
    })
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `{}` on f64 prints the shortest representation that round-trips.
        match self {
            StateSpec::Coherent { mean } => write!(f, "coherent({mean})"),
            StateSpec::Thermal { mean } => write!(f, "thermal({mean})"),
            StateSpec::Number { n } => write!(f, "number({n})"),
            StateSpec::Squeezed { displacement, squeezing } => {
                write!(f, "squeezed(R={displacement},r={squeezing})")
            }
            StateSpec::SqueezedTarget { mean, variance, branch } => {
                write!(f, "squeezed_target(mean={mean},var={variance}")?;
                if *branch == SqueezeBranch::Weak {
                    write!(f, ",branch=weak")?;
                }
                write!(f, ")")
            }
            StateSpec::Mix { weight, first, second } => write!(f, "mix({weight};{first};{second})"),
        }
    }
}

impl StateSpec {
    /// Builds the photon-number distribution, labelled with the canonical
    /// spec text.
    pub fn build(&self, eps: f64) -> photostat::Result<PhotonDistribution> {
        let d = match self {
            StateSpec::Coherent { mean } => coherent_distribution(*mean, eps)?,
            StateSpec::Thermal { mean } => thermal_distribution(*mean, eps)?,
            StateSpec::Number { n } => {
                let n = usize::try_from(*n)
                    .map_err(|_| photostat::Error::Domain(format!("photon number {n} is too large")))?;
                number_state_distribution(n)
            }
            StateSpec::Squeezed { displacement, squeezing } => {
                squeezed_distribution(SqueezedParams::new(*displacement, *squeezing)?, eps)?
            }
            StateSpec::SqueezedTarget { mean, variance, branch } => {
                squeezed_distribution(solve_squeezed_params_on(*mean, *variance, *branch)?, eps)?
            }
            StateSpec::Mix { weight, first, second } => mixture(&MixtureSpec {
                weight: *weight,
                first: first.build(eps)?,
                second: second.build(eps)?,
            })?,
        };
        Ok(d.with_label(self.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> StateSpec {
        parse_state_spec(s).unwrap()
    }

    fn error(s: &str) -> ParseError {
        parse_state_spec(s).unwrap_err()
    }

    #[test]
    fn families() {
        assert_eq!(parse("coherent(1.5)"), StateSpec::Coherent { mean: 1.5 });
        assert_eq!(parse("thermal(11)"), StateSpec::Thermal { mean: 11.0 });
        assert_eq!(parse("number(3)"), StateSpec::Number { n: 3 });
        assert_eq!(
            parse("squeezed(r=-0.5, R=2)"),
            StateSpec::Squeezed { displacement: 2.0, squeezing: -0.5 }
        );
        assert_eq!(
            parse("squeezed_target(mean=6,var=3.6)"),
            StateSpec::SqueezedTarget { mean: 6.0, variance: 3.6, branch: SqueezeBranch::Strong }
        );
        assert_eq!(
            parse("squeezed_target(var=12, mean=6, branch=weak)"),
            StateSpec::SqueezedTarget { mean: 6.0, variance: 12.0, branch: SqueezeBranch::Weak }
        );
    }

    #[test]
    fn nested_mixture() {
        let spec = parse(" mix( 0.9 ; number(1) ; thermal(11) ) ");
        assert_eq!(
            spec,
            StateSpec::Mix {
                weight: 0.9,
                first: Box::new(StateSpec::Number { n: 1 }),
                second: Box::new(StateSpec::Thermal { mean: 11.0 }),
            }
        );
        assert_eq!(spec.to_string(), "mix(0.9;number(1);thermal(11))");
        let deep = parse("mix(0.5;mix(0.2;coherent(1);number(0));squeezed(R=1,r=0.3))");
        assert_eq!(parse(&deep.to_string()), deep);
    }

    #[test]
    fn diagnostics_are_distinct_and_positioned() {
        let e = error("laser(2)");
        assert_eq!((e.offset, e.kind.clone()), (0, ParseErrorKind::UnknownFamily("laser".into())));
        assert!(matches!(error("coherent(1,2)").kind, ParseErrorKind::Arity { .. }));
        assert!(matches!(error("mix(0.5;number(1))").kind, ParseErrorKind::Arity { .. }));
        let e = error("mix(1.5;number(1);number(2))");
        assert_eq!((e.offset, e.kind), (4, ParseErrorKind::WeightOutOfRange(1.5)));
        let e = error("coherent(1.2.3)");
        assert_eq!((e.offset, e.kind), (9, ParseErrorKind::MalformedNumber("1.2.3".into())));
        assert!(matches!(error("coherent(inf)").kind, ParseErrorKind::MalformedNumber(_)));
        assert!(matches!(error("number(-1)").kind, ParseErrorKind::BadCount(_)));
        assert!(matches!(error("number(1.5)").kind, ParseErrorKind::BadCount(_)));
        assert!(matches!(error("squeezed(R=1,s=2)").kind, ParseErrorKind::UnknownKey { .. }));
        assert!(matches!(error("squeezed(R=1,R=2)").kind, ParseErrorKind::DuplicateKey(_)));
        assert!(matches!(error("squeezed_target(mean=1,branch=weak)").kind, ParseErrorKind::MissingKey { .. }));
        assert!(matches!(error("squeezed_target(mean=6,var=3,branch=odd)").kind, ParseErrorKind::UnknownBranch(_)));
        let e = error("coherent(1");
        assert_eq!((e.offset, e.kind), (10, ParseErrorKind::Expected("',' or ')'")));
        let e = error("coherent(");
        assert_eq!((e.offset, e.kind), (9, ParseErrorKind::Expected("an argument")));
        let e = error("coherent(1) x");
        assert_eq!((e.offset, e.kind), (12, ParseErrorKind::TrailingInput));
        assert!(matches!(error("").kind, ParseErrorKind::Expected(_)));
    }

    #[test]
    fn render_points_at_offset() {
        let text = "coherent(1.2.3)";
        let rendered = error(text).render(text);
        assert!(rendered.ends_with(&format!("{}^", " ".repeat(9))));
    }

    #[test]
    fn build_labels_with_canonical_text() {
        let d = parse("mix(0.9; number(1); thermal(11))").build(1e-12).unwrap();
        assert_eq!(d.label(), "mix(0.9;number(1);thermal(11))");
        assert!((d.moments().mean - 2.0).abs() < 1e-9);
        assert!(parse("coherent(0)").build(1e-12).is_err());
        assert!(parse("squeezed_target(mean=6,var=1)").build(1e-12).is_err());
    }
}
