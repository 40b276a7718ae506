use std::fmt;

use crate::error::{invalid, Result};
use crate::topology::ball::RootedBall;

/// Relabeling-invariant encoding of a finite rooted tree.
///
/// Grammar: `code(v) = "(" + concat(sorted codes of v's children) + ")"`,
/// so a leaf is `()`. Children are sorted bytewise. Two rooted trees have the
/// same code exactly when they are rooted-isomorphic.
///
/// The stable serialized form is a 4-byte little-endian length followed by
/// the code bytes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    /// Validates the parenthesis grammar.
    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self> {
        let mut open = 0i64;
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => open += 1,
                b')' => open -= 1,
                _ => return Err(invalid("code", format!("unexpected byte {b:#04x} at {i}"))),
            }
            if open < 0 || (open == 0 && i + 1 != bytes.len()) {
                return Err(invalid("code", format!("unbalanced at {i}")));
            }
        }
        if bytes.is_empty() || open != 0 {
            return Err(invalid("code", "unbalanced or empty"));
        }
        Ok(Self(bytes))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn vertex_count(&self) -> usize {
        self.0.len() / 2
    }

    pub fn to_length_prefixed(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + self.0.len());
        out.extend_from_slice(&(self.0.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.0);
        out
    }

    /// Parses one length-prefixed code, returning it and the unread tail.
    pub fn from_length_prefixed(bytes: &[u8]) -> Result<(Self, &[u8])> {
        let Some((head, rest)) = bytes.split_first_chunk::<4>() else {
            return Err(invalid("code", "missing length prefix"));
        };
        let len = u32::from_le_bytes(*head) as usize;
        if rest.len() < len {
            return Err(invalid("code", "truncated payload"));
        }
        let (payload, tail) = rest.split_at(len);
        Ok((Self::from_bytes(payload.to_vec())?, tail))
    }

    /// Lowercase hex of the code bytes.
    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        if !s.len().is_multiple_of(2) {
            return Err(invalid("code", "odd hex length"));
        }
        let bytes = (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16))
            .collect::<std::result::Result<Vec<u8>, _>>()
            .map_err(|e| invalid("code", e.to_string()))?;
        Self::from_bytes(bytes)
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // always ASCII parentheses
        f.write_str(std::str::from_utf8(&self.0).unwrap_or("?"))
    }
}

/// Bottom-up sorted-children encoding.
pub fn canonical_encode(ball: &RootedBall) -> CanonicalCode {
    let n = ball.len();
    let ranges = ball.child_ranges();
    let mut codes: Vec<Vec<u8>> = vec![Vec::new(); n];
    let mut kids: Vec<Vec<u8>> = Vec::new();
    for v in (0..n).rev() {
        let (start, end) = ranges[v];
        kids.clear();
        kids.extend((start..end).map(|c| std::mem::take(&mut codes[c as usize])));
        kids.sort_unstable();
        let len = 2 + kids.iter().map(Vec::len).sum::<usize>();
        let mut code = Vec::with_capacity(len);
        code.push(b'(');
        for k in kids.drain(..) {
            code.extend_from_slice(&k);
        }
        code.push(b')');
        codes[v] = code;
    }
    CanonicalCode(std::mem::take(&mut codes[0]))
}

pub fn rooted_isomorphic(a: &RootedBall, b: &RootedBall) -> bool {
    a.len() == b.len() && canonical_encode(a) == canonical_encode(b)
}

/// Code of the path of length `l` rooted at an endpoint.
pub fn path_code(l: u32) -> CanonicalCode {
    let n = l as usize + 1;
    let mut bytes = vec![b'('; n];
    bytes.resize(2 * n, b')');
    CanonicalCode(bytes)
}

/// Code of the single-vertex tree.
pub fn leaf_code() -> CanonicalCode {
    CanonicalCode(b"()".to_vec())
}
