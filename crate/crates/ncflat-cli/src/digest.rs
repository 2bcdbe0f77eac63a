//! Input fingerprinting for reports: every report names the exact bytes it
//! judged, so two reports are comparable only when their digests agree.

use sha2::{Digest, Sha256};

/// `"sha256:"` followed by the lowercase hex digest of the bytes.
pub fn sha256_tag(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(7 + 64);
    out.push_str("sha256:");
    for byte in digest {
        use std::fmt::Write;
        write!(out, "{byte:02x}").expect("writing hex into a String cannot fail");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_empty_input_has_the_well_known_digest() {
        assert_eq!(
            sha256_tag(b""),
            "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn digests_separate_different_inputs() {
        assert_ne!(sha256_tag(b"a"), sha256_tag(b"b"));
    }
}
