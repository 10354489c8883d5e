use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};

/// Collects a command's primary output. Report lines always go to stdout;
/// artifacts go to the output directory when one is given and are inlined
/// into stdout otherwise. A `<stem>.report` copy of the report is written
/// alongside the artifacts.
pub struct Sink {
    dir: Option<PathBuf>,
    stem: String,
    report: String,
    inline: String,
}

impl Sink {
    pub fn new(dir: Option<PathBuf>, stem: &str) -> Result<Sink> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
        }
        Ok(Sink { dir, stem: stem.to_string(), report: String::new(), inline: String::new() })
    }

    pub fn line(&mut self, text: impl AsRef<str>) {
        self.report.push_str(text.as_ref());
        self.report.push('\n');
    }

    pub fn artifact(&mut self, name: &str, contents: &str) -> Result<()> {
        match &self.dir {
            Some(d) => {
                let path = d.join(name);
                fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
            }
            None => {
                self.inline.push_str(&format!("## {name}\n{contents}"));
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<()> {
        if let Some(d) = &self.dir {
            let path = d.join(format!("{}.report", self.stem));
            fs::write(&path, &self.report).with_context(|| format!("writing {}", path.display()))?;
        }
        let mut out = std::io::stdout().lock();
        let written = out
            .write_all(self.report.as_bytes())
            .and_then(|_| out.write_all(self.inline.as_bytes()))
            .and_then(|_| out.flush());
        match written {
            // a closed pipe (e.g. `| head`) is not an error
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        }
    }
}
