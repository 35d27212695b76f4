/// Splits an identifier or literal into lowercase sub-tokens.
///
/// Boundaries: any non-alphanumeric character (underscores, quotes, dots),
/// lower-to-upper case changes, the last capital of an acronym followed by a
/// lowercase letter (`URLParser` -> `url`, `parser`) and letter/digit
/// changes. A token without any alphanumeric piece is returned whole,
/// lowercased.
pub fn split_subtokens(token: &str) -> Vec<String> {
    let mut pieces = Vec::new();
    for chunk in token.split(|c: char| !c.is_alphanumeric()) {
        let chars: Vec<char> = chunk.chars().collect();
        let mut start = 0;
        for i in 1..chars.len() {
            let (prev, cur) = (chars[i - 1], chars[i]);
            let next = chars.get(i + 1).copied();
            let boundary = (prev.is_lowercase() && cur.is_uppercase())
                || (prev.is_uppercase()
                    && cur.is_uppercase()
                    && next.is_some_and(|n| n.is_lowercase()))
                || (prev.is_alphabetic() && cur.is_numeric())
                || (prev.is_numeric() && cur.is_alphabetic());
            if boundary {
                pieces.push(chars[start..i].iter().collect::<String>().to_lowercase());
                start = i;
            }
        }
        if start < chars.len() {
            pieces.push(chars[start..].iter().collect::<String>().to_lowercase());
        }
    }
    if pieces.is_empty() {
        pieces.push(token.to_lowercase());
    }
    pieces
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn camel_case_with_acronym() {
        assert_eq!(split_subtokens("processURL"), ["process", "url"]);
        assert_eq!(split_subtokens("URLParser"), ["url", "parser"]);
        assert_eq!(split_subtokens("baseURL"), ["base", "url"]);
    }

    #[test]
    fn single_letter() {
        assert_eq!(split_subtokens("x"), ["x"]);
    }

    #[test]
    fn underscores_and_digits() {
        assert_eq!(split_subtokens("get_id2Name"), ["get", "id", "2", "name"]);
        assert_eq!(split_subtokens("_size"), ["size"]);
        assert_eq!(split_subtokens("MAX_VALUE"), ["max", "value"]);
    }

    #[test]
    fn literals() {
        assert_eq!(split_subtokens("\"Alice\""), ["alice"]);
        assert_eq!(split_subtokens("3000"), ["3000"]);
        assert_eq!(split_subtokens("2.345"), ["2", "345"]);
        assert_eq!(split_subtokens("_"), ["_"]);
        assert_eq!(split_subtokens("\"\""), ["\"\""]);
    }

    proptest! {
        #[test]
        fn pieces_are_fixed_points(token in "[A-Za-z_0-9$\"]{1,24}") {
            let pieces = split_subtokens(&token);
            prop_assert!(!pieces.is_empty());
            for piece in &pieces {
                prop_assert!(!piece.is_empty());
                prop_assert_eq!(split_subtokens(piece), vec![piece.clone()]);
            }
        }
    }
}
