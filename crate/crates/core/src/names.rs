//! Deterministic names for generated objects, morphisms and elements.

pub fn pair(a: &str, b: &str) -> String {
    format!("⟨{a},{b}⟩")
}

pub fn triple(a: &str, b: &str, c: &str) -> String {
    format!("⟨{a},{b},{c}⟩")
}

pub fn tuple<S: AsRef<str>>(parts: &[S]) -> String {
    let mut out = String::from("⟨");
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(p.as_ref());
    }
    out.push('⟩');
    out
}

/// Name of an equivalence class, after its least representative.
pub fn class(rep: &str) -> String {
    format!("[{rep}]")
}

/// Plain positional labels `0, 1, ..., n-1`.
pub fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}
