// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Run manifests: everything needed to repeat a run.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::miner::MinerConfig;
use crate::synth::GenConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A file the run read or wrote, with its SHA-256 digest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
}

impl FileRecord {
    pub fn of(path: &Path) -> Result<Self> {
        let mut file = std::fs::File::open(path)?;
        let mut hasher = Sha256::new();
        let mut buf = [0u8; 1 << 16];
        loop {
            let n = file.read(&mut buf)?;
            if n == 0 {
                break;
            }
            hasher.update(&buf[..n]);
        }
        Ok(FileRecord {
            path: path.display().to_string(),
            sha256: hex::encode(hasher.finalize()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum RunManifest {
    Generate {
        version: String,
        config: GenConfig,
        network: FileRecord,
        truth: FileRecord,
    },
    Mine {
        version: String,
        config: MinerConfig,
        seed: u64,
        input: FileRecord,
        output: FileRecord,
        results: usize,
    },
}

impl RunManifest {
    pub fn write<W: Write>(&self, mut sink: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut sink, self).map_err(std::io::Error::from)?;
        writeln!(sink)?;
        sink.flush()?;
        Ok(())
    }

    pub fn read<R: Read>(source: R) -> Result<Self> {
        Ok(serde_json::from_reader(source).map_err(std::io::Error::from)?)
    }
}
