use serde_json::Value;

/// Writes results as JSON lines, or as plain text with `--human`.
pub struct Output {
    human: bool,
}

impl Output {
    pub fn new(human: bool) -> Self {
        Output { human }
    }

    /// Prints `value` as one JSON line, or the rows of `table` as aligned
    /// `key  value` pairs.
    pub fn record(&mut self, value: Value, table: &[(&str, String)]) {
        if self.human {
            let width = table.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (key, text) in table {
                println!("{key:<width$}  {text}");
            }
            println!();
        } else {
            println!("{value}");
        }
    }

    /// Prints raw text (an emitted file) unchanged.
    pub fn raw(&mut self, text: &str) {
        print!("{text}");
    }
}
