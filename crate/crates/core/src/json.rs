//! JSON loading with pointer-located schema errors, and canonical emission.

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_path_to_error::Segment;

use crate::error::{Error, Result};

/// Parses `text`, reporting schema violations at a JSON pointer.
pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let mut pointer = String::new();
        for seg in e.path().iter() {
            pointer.push('/');
            match seg {
                Segment::Seq { index } => pointer.push_str(&index.to_string()),
                Segment::Map { key } | Segment::Enum { variant: key } => {
                    pointer.push_str(&key.replace('~', "~0").replace('/', "~1"))
                }
                Segment::Unknown => pointer.push('?'),
            }
        }
        let inner = e.into_inner();
        if inner.is_syntax() || inner.is_eof() {
            return Error::Parse(inner.to_string());
        }
        let message = inner.to_string();
        // serde reports a missing key at its parent; point at the key itself.
        if let Some(field) = message
            .strip_prefix("missing field `")
            .and_then(|r| r.split('`').next())
        {
            pointer.push('/');
            pointer.push_str(field);
        }
        if pointer.is_empty() {
            pointer.push('/');
        }
        Error::schema(pointer, message)
    })
}

/// Pretty-printed JSON with a trailing newline. Map ordering comes from the
/// serialized types (BTreeMap / declaration order), so output is byte-stable.
pub fn to_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use serde::Deserialize;

    use super::*;

    #[derive(Debug, Deserialize)]
    #[allow(dead_code)]
    struct Doc {
        objects: Vec<String>,
        identities: BTreeMap<String, String>,
    }

    #[test]
    fn missing_key_points_at_key() {
        let err = from_str::<Doc>(r#"{"objects": []}"#).unwrap_err();
        assert_eq!(err.code(), "schema_error");
        assert!(matches!(err, Error::Schema { ref pointer, .. } if pointer == "/identities"));
    }

    #[test]
    fn nested_type_error_is_located() {
        let err = from_str::<Doc>(r#"{"objects": ["a", 3], "identities": {}}"#).unwrap_err();
        assert!(matches!(err, Error::Schema { ref pointer, .. } if pointer == "/objects/1"));
    }

    #[test]
    fn syntax_error_is_parse_error() {
        assert_eq!(from_str::<Doc>("{").unwrap_err().code(), "parse_error");
    }
}
