use std::ops::Range;

use super::pos::{tag_token, PosTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Number,
    Url,
    Mention,
    Hashtag,
    Punct,
    Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    /// Byte range in the source text.
    pub span: Range<usize>,
    pub kind: TokenKind,
    pub tag: PosTag,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenizedText {
    /// Token index ranges into `tokens`, one per sentence.
    pub sentences: Vec<Range<usize>>,
    pub tokens: Vec<Token>,
}

impl TokenizedText {
    pub fn sentence(&self, i: usize) -> &[Token] {
        &self.tokens[self.sentences[i].clone()]
    }

    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.is_word())
    }

    /// Sentences holding at least one word.
    pub fn word_sentence_count(&self) -> usize {
        self.sentences
            .iter()
            .filter(|r| self.tokens[(*r).clone()].iter().any(Token::is_word))
            .count()
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '…' | '“' | '”' | '‘' | '’' | '–' | '—' | '«' | '»' | '¡' | '¿' | '·' | '•'
        )
}

fn is_sentence_end(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

/// Length in bytes of the word starting at `s`: alphanumerics, with inner
/// apostrophes, hyphens and (between digits) `.`/`,` kept attached.
fn word_len(s: &str) -> usize {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut end = 0;
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        if is_word_char(c) {
            end = off + c.len_utf8();
            i += 1;
            continue;
        }
        let joiner = matches!(c, '\'' | '’' | '-') || (matches!(c, '.' | ',') && i > 0 && chars[i - 1].1.is_ascii_digit());
        let next_ok = chars.get(i + 1).is_some_and(|&(_, n)| {
            if matches!(c, '.' | ',') {
                n.is_ascii_digit()
            } else {
                is_word_char(n)
            }
        });
        if joiner && i > 0 && next_ok {
            i += 1;
            continue;
        }
        break;
    }
    end
}

fn classify_word(w: &str) -> TokenKind {
    if w.chars().any(char::is_alphabetic) {
        TokenKind::Word
    } else if w.chars().any(|c| c.is_ascii_digit()) {
        TokenKind::Number
    } else {
        TokenKind::Word
    }
}

/// Splits text into sentences and tokens. URLs, `@mentions` and `#hashtags`
/// stay whole; punctuation is detached one character per token. A sentence
/// ends at `.`, `!` or `?` followed by whitespace or the end of the text.
pub fn tokenize(text: &str) -> TokenizedText {
    let mut raw: Vec<(Range<usize>, TokenKind)> = Vec::new();
    let mut ends: Vec<bool> = Vec::new();

    let mut pos = 0;
    for chunk in text.split_whitespace() {
        let start = pos + text[pos..].find(chunk).expect("chunk comes from text");
        pos = start + chunk.len();
        let mut i = 0;
        while i < chunk.len() {
            let rest = &chunk[i..];
            let c = rest.chars().next().expect("non-empty");
            let (len, kind) = if rest.starts_with("http://") || rest.starts_with("https://") {
                let body = rest
                    .char_indices()
                    .find(|&(_, ch)| matches!(ch, '"' | '<' | '>'))
                    .map_or(rest.len(), |(o, _)| o);
                let trimmed = rest[..body].trim_end_matches(|ch: char| matches!(ch, '.' | ',' | '!' | '?' | ';' | ':' | ')' | '\''));
                (trimmed.len().max(1), TokenKind::Url)
            } else if (c == '@' || c == '#') && rest[1..].chars().next().is_some_and(is_word_char) {
                let body = rest[1..]
                    .char_indices()
                    .find(|&(_, ch)| !is_word_char(ch))
                    .map_or(rest.len() - 1, |(o, _)| o);
                let kind = if c == '@' { TokenKind::Mention } else { TokenKind::Hashtag };
                (1 + body, kind)
            } else if is_word_char(c) {
                let len = word_len(rest);
                (len, classify_word(&rest[..len]))
            } else if is_punct(c) {
                (c.len_utf8(), TokenKind::Punct)
            } else {
                (c.len_utf8(), TokenKind::Symbol)
            };
            let span = start + i..start + i + len;
            let at_end = span.end == text.len() || text[span.end..].starts_with(char::is_whitespace);
            ends.push(kind == TokenKind::Punct && is_sentence_end(c) && len == c.len_utf8() && at_end);
            raw.push((span, kind));
            i += len;
        }
    }

    let mut sentences = Vec::new();
    let mut sentence_start = 0;
    for (i, &end) in ends.iter().enumerate() {
        if end {
            sentences.push(sentence_start..i + 1);
            sentence_start = i + 1;
        }
    }
    if sentence_start < raw.len() {
        sentences.push(sentence_start..raw.len());
    }

    let tokens = raw
        .into_iter()
        .map(|(span, kind)| {
            let text = text[span.clone()].to_string();
            let tag = tag_token(&text, kind);
            Token { text, span, kind, tag }
        })
        .collect();
    TokenizedText { sentences, tokens }
}
