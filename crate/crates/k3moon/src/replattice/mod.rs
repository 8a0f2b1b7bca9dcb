//! Character tables, the lattices they span on element orders 1..8, and
//! decompositions of symmetric-power traces into irreducibles.

pub mod audit;
pub mod lattices;
pub mod m23;
pub mod table;

pub use lattices::{lattice_report, mukai_lattice_n, LatticeReport, MukaiComponent};
pub use table::{CharacterTable, RationalClass};

use std::path::{Path, PathBuf};

use crate::fgdata::FgData;
use crate::Error;

/// Layout of the data directory.
#[derive(Clone, Debug)]
pub struct DataDir {
    pub root: PathBuf,
}

impl DataDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        DataDir { root: root.into() }
    }

    pub fn table(&self, stem: &str) -> Result<CharacterTable, Error> {
        CharacterTable::load(&self.root.join("tables").join(format!("{stem}.json")))
    }

    pub fn m23(&self) -> Result<CharacterTable, Error> {
        self.table("m23")
    }

    pub fn m24(&self) -> Result<CharacterTable, Error> {
        self.table("m24")
    }

    pub fn co0(&self) -> Result<CharacterTable, Error> {
        self.table("co0_restricted")
    }

    /// The eleven maximal symplectic groups, h01 .. h11, in file-name order.
    pub fn mukai(&self) -> Result<Vec<CharacterTable>, Error> {
        let dir = self.root.join("tables");
        let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
            .map_err(|e| Error::Data(format!("{}: {e}", dir.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.len() > 3 && n.starts_with('h') && n[1..3].chars().all(|c| c.is_ascii_digit()))
            })
            .collect();
        files.sort();
        if files.len() != 11 {
            return Err(Error::Data(format!("expected 11 Mukai tables in {}, found {}", dir.display(), files.len())));
        }
        files.iter().map(|p| CharacterTable::load(p)).collect()
    }

    pub fn fg(&self) -> Result<FgData, Error> {
        FgData::load(&self.root.join("moonshine").join("fg_m24.json"))
    }

    pub fn forms(&self) -> Result<Vec<m23::ShippedForm>, Error> {
        m23::load_forms(&self.forms_path())
    }

    pub fn forms_path(&self) -> PathBuf {
        self.root.join("forms").join("m23_rational_forms.json")
    }

    pub fn exists(&self) -> bool {
        Path::new(&self.root).join("tables").is_dir()
    }
}
