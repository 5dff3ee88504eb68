use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub message: String,
    pub severity: Severity,
}

/// Diagnostics of one parse, tagged with the source's origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    pub origin: String,
    pub items: Vec<Diagnostic>,
}

impl Diagnostics {
    pub fn single(origin: &str, pos: Pos, message: impl Into<String>) -> Self {
        Diagnostics {
            origin: origin.to_string(),
            items: vec![Diagnostic { pos, message: message.into(), severity: Severity::Error }],
        }
    }

    pub fn first_message(&self) -> &str {
        self.items.first().map_or("", |d| d.message.as_str())
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.items.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let sev = match d.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            };
            write!(f, "{}:{}:{}: {}: {}", self.origin, d.pos.line, d.pos.col, sev, d.message)?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostics {}

/// Text to parse plus a name for diagnostics.
#[derive(Clone, Debug)]
pub struct Source<'a> {
    pub text: &'a str,
    pub origin: &'a str,
}

impl<'a> Source<'a> {
    pub fn new(text: &'a str, origin: &'a str) -> Self {
        Source { text, origin }
    }

    pub fn anonymous(text: &'a str) -> Self {
        Source::new(text, "<input>")
    }

    /// Position of the last character, or 1:1 for empty text. End-of-input diagnostics
    /// point here so that every position lies inside the source.
    pub fn end_pos(&self) -> Pos {
        let mut pos = Pos { line: 1, col: 1 };
        let mut last = pos;
        for c in self.text.chars() {
            last = pos;
            if c == '\n' {
                pos.line += 1;
                pos.col = 1;
            } else {
                pos.col += 1;
            }
        }
        last
    }
}
