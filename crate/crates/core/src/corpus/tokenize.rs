use super::types::{Sentence, Token};

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// Hyphens and apostrophes stay attached between two word characters;
/// periods and commas stay attached between two digits ("3.5", "1,000").
fn joins_words(c: char, prev: Option<char>, next: Option<char>) -> bool {
    let (Some(p), Some(n)) = (prev, next) else {
        return false;
    };
    match c {
        '-' | '\'' | '\u{2019}' => is_word_char(p) && is_word_char(n),
        '.' | ',' => p.is_ascii_digit() && n.is_ascii_digit(),
        _ => false,
    }
}

/// Splits raw text into tokens: every punctuation or symbol character becomes
/// its own token, runs of word characters (with intra-word hyphens and
/// apostrophes) stay together, and whitespace only separates.
///
/// Returns an empty sentence when nothing but whitespace remains.
pub fn tokenize(text: &str) -> Sentence {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut word = String::new();
        for (i, &c) in chars.iter().enumerate() {
            let prev = i.checked_sub(1).map(|j| chars[j]);
            let next = chars.get(i + 1).copied();
            if is_word_char(c) || joins_words(c, prev, next) {
                word.push(c);
            } else {
                if !word.is_empty() {
                    tokens.extend(Token::new(std::mem::take(&mut word)));
                }
                tokens.extend(Token::new(c.to_string()));
            }
        }
        if !word.is_empty() {
            tokens.extend(Token::new(word));
        }
    }
    Sentence::new(tokens)
}

/// Maps typographic punctuation onto its ASCII counterpart.
pub fn normalize_punctuation(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\u{201C}' | '\u{201D}' | '\u{201E}' | '\u{201F}' | '\u{00AB}' | '\u{00BB}'
            | '\u{2033}' => out.push('"'),
            '\u{2018}' | '\u{2019}' | '\u{201A}' | '\u{201B}' | '\u{2032}' | '\u{2039}'
            | '\u{203A}' => out.push('\''),
            '\u{2010}' | '\u{2011}' | '\u{2012}' | '\u{2013}' | '\u{2014}' | '\u{2015}'
            | '\u{2212}' => out.push('-'),
            '\u{2026}' => out.push_str("..."),
            '\u{00A0}' | '\u{2007}' | '\u{202F}' => out.push(' '),
            _ => out.push(c),
        }
    }
    out
}

/// Lowercased prefix of at most `k` characters.
pub fn stem(token: &str, k: usize) -> String {
    assert!(k >= 1, "stem length must be at least 1");
    token.to_lowercase().chars().take(k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn words(s: &Sentence) -> Vec<&str> {
        s.words()
    }

    #[test]
    fn splits_punctuation() {
        assert_eq!(words(&tokenize("Hello, world.")), ["Hello", ",", "world", "."]);
    }

    #[test]
    fn keeps_intra_word_hyphen_and_apostrophe() {
        assert_eq!(words(&tokenize("co-operate")), ["co-operate"]);
        assert_eq!(words(&tokenize("patient's")), ["patient's"]);
        assert_eq!(words(&tokenize("-x- 'y'")), ["-", "x", "-", "'", "y", "'"]);
        assert_eq!(words(&tokenize("a--b")), ["a", "-", "-", "b"]);
    }

    #[test]
    fn collapses_whitespace() {
        assert_eq!(words(&tokenize("a  b")), ["a", "b"]);
        assert_eq!(words(&tokenize(" \t a\u{00A0}b ")), ["a", "b"]);
        assert!(tokenize("   ").is_empty());
    }

    #[test]
    fn decimal_numbers_stay_whole() {
        assert_eq!(words(&tokenize("2.5 mg, 1,000 ml.")), ["2.5", "mg", ",", "1,000", "ml", "."]);
    }

    #[test]
    fn normalizes_typographic_punctuation() {
        assert_eq!(normalize_punctuation("\u{201C}ok\u{201D}"), "\"ok\"");
        assert_eq!(normalize_punctuation("a\u{2014}b"), "a-b");
        assert_eq!(normalize_punctuation("wait\u{2026}"), "wait...");
        assert_eq!(normalize_punctuation("1\u{00A0}mg"), "1 mg");
        assert_eq!(normalize_punctuation("plain text"), "plain text");
    }

    #[test]
    fn stems_by_characters() {
        assert_eq!(stem("samochodami", 6), "samoch");
        assert_eq!(stem("cat", 6), "cat");
        assert_eq!(stem("Dom", 6), "dom");
        assert_eq!(stem("żółwiami", 3), "żół");
    }

    proptest! {
        #[test]
        fn tokens_never_contain_whitespace_and_retokenizing_is_fixpoint(text in "\\PC{0,40}") {
            let first = tokenize(&text);
            for t in first.iter() {
                prop_assert!(!t.is_empty());
                prop_assert!(!t.chars().any(char::is_whitespace));
            }
            let again = tokenize(&first.to_string());
            prop_assert_eq!(again, first);
        }

        #[test]
        fn normalization_is_idempotent(text in "[a-z \u{201C}\u{201D}\u{2018}\u{2019}\u{2013}\u{2014}\u{2026}\u{00A0}.,-]{0,40}") {
            let once = normalize_punctuation(&text);
            prop_assert_eq!(normalize_punctuation(&once), once);
        }

        #[test]
        fn normalization_is_idempotent_on_any_text(text in "\\PC{0,40}") {
            let once = normalize_punctuation(&text);
            prop_assert_eq!(normalize_punctuation(&once), once);
        }
    }
}
