//! Opaque participant identifiers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const MAX_LEN: usize = 64;

macro_rules! identifier {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(try_from = "String", into = "String")]
        pub struct $name(String);

        impl $name {
            /// Accepts identifiers of 1 to 64 bytes.
            pub fn new(id: impl Into<String>) -> Result<Self> {
                let id = id.into();
                if id.is_empty() || id.len() > MAX_LEN {
                    return Err(Error::Precondition("identifier must be 1 to 64 bytes"));
                }
                Ok(Self(id))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl TryFrom<String> for $name {
            type Error = Error;

            fn try_from(id: String) -> Result<Self> {
                Self::new(id)
            }
        }

        impl TryFrom<&str> for $name {
            type Error = Error;

            fn try_from(id: &str) -> Result<Self> {
                Self::new(id)
            }
        }

        impl From<$name> for String {
            fn from(id: $name) -> String {
                id.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

identifier!(
    /// Internal participant identity; the key of investment records.
    IntentAccount
);

identifier!(
    /// External account identifier bound to an [`IntentAccount`] on first deposit.
    AccountId
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_bounds() {
        assert!(IntentAccount::new("").is_err());
        assert!(IntentAccount::new("a").is_ok());
        assert!(IntentAccount::new("x".repeat(64)).is_ok());
        assert!(AccountId::new("x".repeat(65)).is_err());
    }

    #[test]
    fn serde_rejects_empty() {
        assert!(serde_json::from_str::<IntentAccount>("\"\"").is_err());
        let id: AccountId = serde_json::from_str("\"alice.near\"").unwrap();
        assert_eq!(id.as_str(), "alice.near");
    }
}
