use std::ops::Range;

/// Lowercased word tokens with byte spans into the source text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<String>,
    pub spans: Vec<Range<usize>>,
}

impl TokenStream {
    pub fn from_tokens<S: Into<String>>(tokens: impl IntoIterator<Item = S>) -> Self {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        let spans = vec![0..0; tokens.len()];
        TokenStream { tokens, spans }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '-' | '\u{2010}' | '\u{2011}')
}

/// Splits on whitespace and on any character that is neither alphanumeric
/// nor an apostrophe/hyphen between two alphanumerics. Curly apostrophes
/// normalise to `'` and non-ASCII hyphens to `-`.
pub fn tokenize(text: &str) -> TokenStream {
    let mut out = TokenStream::default();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut current = String::new();
    let mut start = 0;
    let mut end = 0;

    let flush = |out: &mut TokenStream, current: &mut String, start: usize, end: usize| {
        if !current.is_empty() {
            out.tokens.push(std::mem::take(current));
            out.spans.push(start..end);
        }
    };

    for (i, &(pos, c)) in chars.iter().enumerate() {
        let keep = if c.is_alphanumeric() {
            true
        } else if is_joiner(c) {
            let prev_alnum = !current.is_empty()
                && i > 0
                && chars[i - 1].1.is_alphanumeric();
            let next_alnum = chars.get(i + 1).is_some_and(|&(_, n)| n.is_alphanumeric());
            prev_alnum && next_alnum
        } else {
            false
        };
        if keep {
            if current.is_empty() {
                start = pos;
            }
            match c {
                '\u{2019}' => current.push('\''),
                '\u{2010}' | '\u{2011}' => current.push('-'),
                _ => current.extend(c.to_lowercase()),
            }
            end = pos + c.len_utf8();
        } else {
            flush(&mut out, &mut current, start, end);
        }
    }
    flush(&mut out, &mut current, start, end);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        tokenize(s).tokens
    }

    #[test]
    fn strips_punctuation() {
        assert_eq!(
            toks("I swear to God, honestly!"),
            ["i", "swear", "to", "god", "honestly"]
        );
    }

    #[test]
    fn keeps_intra_word_apostrophe() {
        assert_eq!(toks("Can't remember."), ["can't", "remember"]);
        assert_eq!(toks("Didn\u{2019}t"), ["didn't"]);
        assert_eq!(toks("'cause they're"), ["cause", "they're"]);
        assert_eq!(toks("well-known -- fact"), ["well-known", "fact"]);
    }

    #[test]
    fn empty() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  ... !").is_empty());
    }

    #[test]
    fn spans_point_at_source() {
        let text = "Uh, I FORGET.";
        let ts = tokenize(text);
        let raw: Vec<&str> = ts.spans.iter().map(|r| &text[r.clone()]).collect();
        assert_eq!(raw, ["Uh", "I", "FORGET"]);
    }

    #[test]
    fn punctuation_separates() {
        assert_eq!(toks("well...i"), ["well", "i"]);
    }
}
