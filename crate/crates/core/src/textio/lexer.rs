use crate::textio::diag::{Diagnostics, Pos, Source};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Nat(u64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Colon,
    Comma,
    Arrow,
    Minus,
    Plus,
    Star,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Eq,
    Assign,
    Bang,
    AndAnd,
    OrOr,
    /// `E<>`
    Exists,
    /// `A[]`
    Forall,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Nat(n) => format!("number `{n}`"),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Comma => ",",
            Tok::Arrow => "->",
            Tok::Minus => "-",
            Tok::Plus => "+",
            Tok::Star => "*",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::EqEq => "==",
            Tok::Eq => "=",
            Tok::Assign => ":=",
            Tok::Bang => "!",
            Tok::AndAnd => "&&",
            Tok::OrOr => "||",
            Tok::Exists => "E<>",
            Tok::Forall => "A[]",
            Tok::Ident(_) | Tok::Nat(_) => "",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn lex(src: &Source) -> Result<Vec<Token>, Diagnostics> {
    let chars: Vec<char> = src.text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |pos: Pos, msg: String| Err(Diagnostics::single(src.origin, pos, msg));
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let rest = |k: usize| chars.get(i + k).copied();
        let (tok, len) = if c == 'E' && rest(1) == Some('<') && rest(2) == Some('>') {
            (Tok::Exists, 3)
        } else if c == 'A' && rest(1) == Some('[') && rest(2) == Some(']') {
            (Tok::Forall, 3)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j < chars.len() && chars[j] == '.' {
                return err(pos, "non-integer coefficient".into());
            }
            let text: String = chars[i..j].iter().collect();
            match text.parse::<u64>() {
                Ok(n) if n <= i64::MAX as u64 => (Tok::Nat(n), j - i),
                _ => return err(pos, format!("integer literal {text} out of range")),
            }
        } else {
            let two = (c, rest(1));
            match two {
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('<', Some('=')) => (Tok::Le, 2),
                ('>', Some('=')) => (Tok::Ge, 2),
                ('=', Some('=')) => (Tok::EqEq, 2),
                (':', Some('=')) => (Tok::Assign, 2),
                ('&', Some('&')) => (Tok::AndAnd, 2),
                ('|', Some('|')) => (Tok::OrOr, 2),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                (';', _) => (Tok::Semi, 1),
                (':', _) => (Tok::Colon, 1),
                (',', _) => (Tok::Comma, 1),
                ('-', _) => (Tok::Minus, 1),
                ('+', _) => (Tok::Plus, 1),
                ('*', _) => (Tok::Star, 1),
                ('<', _) => (Tok::Lt, 1),
                ('>', _) => (Tok::Gt, 1),
                ('=', _) => (Tok::Eq, 1),
                ('!', _) => (Tok::Bang, 1),
                _ => return err(pos, format!("unexpected character {c:?}")),
            }
        };
        out.push(Token { tok, pos });
        i += len;
        col += len;
    }
    Ok(out)
}
