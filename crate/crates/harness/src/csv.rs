use std::fmt::Display;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Comma-separated writer with the `# schema: name v1` line and a header.
pub struct CsvWriter {
    out: BufWriter<File>,
    width: usize,
}

impl CsvWriter {
    pub fn create(path: &Path, schema: &str, header: &[&str]) -> std::io::Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "# schema: {schema} v1")?;
        writeln!(out, "{}", header.join(","))?;
        Ok(Self {
            out,
            width: header.len(),
        })
    }

    pub fn row(&mut self, fields: &[&dyn Display]) -> std::io::Result<()> {
        debug_assert_eq!(fields.len(), self.width);
        let line: Vec<String> = fields.iter().map(|f| f.to_string()).collect();
        writeln!(self.out, "{}", line.join(","))
    }

    pub fn finish(mut self) -> std::io::Result<()> {
        self.out.flush()
    }
}

/// Shortest round-trip form of an `f64`, in exponent notation outside
/// `[1e-4, 1e15)` so tiny values stay readable.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let a = self.0.abs();
        if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{:e}", self.0)
        }
    }
}
