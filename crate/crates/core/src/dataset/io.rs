//! Dataset and predicate-map file ingestion.
//!
//! Datasets are line-delimited JSON, one image record per line:
//!
//! ```json
//! {"image_id": "x", "width": 640, "height": 480, "tags": ["indoor"],
//!  "objects": [{"id": 0, "class": "person", "bbox": [1, 2, 30, 40]}],
//!  "triplets": [{"s": 0, "p": "sitting on", "o": 1}]}
//! ```
//!
//! Predicate maps are a single JSON object, each key an ontology predicate
//! and each value a list of equivalent source labels.

use super::{PredicateMap, SceneGraph, SceneObject};
use crate::reasoner::{Triplet, TripletSet};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record at line {line}{image}: {message}")]
    Malformed {
        line: usize,
        /// ` (image <id>)` when the id could be recovered.
        image: String,
        message: String,
    },
    #[error("image `{image_id}`: triplet references unknown object id {object}")]
    UnknownObjectId { image_id: String, object: u32 },
    #[error("image `{image_id}`: duplicate object id {object}")]
    DuplicateObjectId { image_id: String, object: u32 },
    #[error("source predicate `{label}` is mapped to both `{first}` and `{second}`")]
    AmbiguousPredicateMapping {
        label: String,
        first: String,
        second: String,
    },
    #[error("validation fraction must be in (0, 1), got {0}")]
    InvalidFraction(f64),
}

#[derive(Serialize, Deserialize)]
struct SceneGraphDoc {
    image_id: String,
    width: u32,
    height: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    tags: Vec<String>,
    #[serde(default)]
    objects: Vec<ObjectDoc>,
    #[serde(default)]
    triplets: Vec<TripletDoc>,
}

#[derive(Serialize, Deserialize)]
struct ObjectDoc {
    id: u32,
    class: String,
    bbox: [f64; 4],
}

#[derive(Serialize, Deserialize)]
struct TripletDoc {
    s: u32,
    p: String,
    o: u32,
}

/// Result of loading a dataset file.
#[derive(Debug)]
pub struct LoadedDataset {
    pub graphs: Vec<SceneGraph>,
    /// Duplicate triplets dropped across all records.
    pub duplicate_triplets: usize,
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<LoadedDataset, DatasetError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = BufReader::new(file);

    let mut graphs = Vec::new();
    let mut duplicate_triplets = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| DatasetError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let (graph, dropped) = parse_record(&line, line_no)?;
        duplicate_triplets += dropped;
        graphs.push(graph);
    }
    Ok(LoadedDataset {
        graphs,
        duplicate_triplets,
    })
}

fn parse_record(line: &str, line_no: usize) -> Result<(SceneGraph, usize), DatasetError> {
    let doc: SceneGraphDoc = serde_json::from_str(line).map_err(|e| {
        // try to salvage the image id for the error message
        let image = serde_json::from_str::<serde_json::Value>(line)
            .ok()
            .and_then(|v| v.get("image_id").and_then(|i| i.as_str().map(String::from)))
            .map(|id| format!(" (image `{id}`)"))
            .unwrap_or_default();
        DatasetError::Malformed {
            line: line_no,
            image,
            message: e.to_string(),
        }
    })?;

    let malformed = |message: String| DatasetError::Malformed {
        line: line_no,
        image: format!(" (image `{}`)", doc.image_id),
        message,
    };

    if doc.width == 0 || doc.height == 0 {
        return Err(malformed("image dimensions must be positive".into()));
    }

    let mut ids = BTreeSet::new();
    let mut objects = Vec::with_capacity(doc.objects.len());
    for obj in &doc.objects {
        if obj.bbox[2] <= 0.0 || obj.bbox[3] <= 0.0 {
            return Err(malformed(format!(
                "object {} has non-positive bbox size",
                obj.id
            )));
        }
        if !ids.insert(obj.id) {
            return Err(DatasetError::DuplicateObjectId {
                image_id: doc.image_id.clone(),
                object: obj.id,
            });
        }
        objects.push(SceneObject::new(obj.id, obj.class.clone(), obj.bbox));
    }

    let mut triplets = TripletSet::new();
    let mut dropped = 0;
    for t in &doc.triplets {
        if !ids.contains(&t.s) {
            return Err(DatasetError::UnknownObjectId {
                image_id: doc.image_id.clone(),
                object: t.s,
            });
        }
        if !ids.contains(&t.o) {
            return Err(DatasetError::UnknownObjectId {
                image_id: doc.image_id.clone(),
                object: t.o,
            });
        }
        if t.s == t.o {
            return Err(malformed(format!(
                "triplet relates object {} to itself",
                t.s
            )));
        }
        if !triplets.insert(
            Triplet::new(t.s, t.p.clone(), t.o),
            crate::reasoner::Provenance::Asserted,
        ) {
            dropped += 1;
        }
    }

    Ok((
        SceneGraph {
            image_id: doc.image_id,
            width: doc.width,
            height: doc.height,
            tags: doc.tags.into_iter().collect(),
            objects,
            triplets,
        },
        dropped,
    ))
}

/// Write graphs as line-delimited JSON, one record per line, in input order.
pub fn save_dataset(graphs: &[SceneGraph], mut writer: impl Write) -> Result<(), std::io::Error> {
    for graph in graphs {
        let doc = SceneGraphDoc {
            image_id: graph.image_id.clone(),
            width: graph.width,
            height: graph.height,
            tags: graph.tags.iter().cloned().collect(),
            objects: graph
                .objects
                .iter()
                .map(|o| ObjectDoc {
                    id: o.id,
                    class: o.class_name.clone(),
                    bbox: o.bbox,
                })
                .collect(),
            triplets: graph
                .triplets
                .triplets()
                .map(|t| TripletDoc {
                    s: t.subject,
                    p: t.predicate.clone(),
                    o: t.object,
                })
                .collect(),
        };
        serde_json::to_writer(&mut writer, &doc)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn load_predicate_map(path: impl AsRef<Path>) -> Result<PredicateMap, DatasetError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let entries: IndexMap<String, Vec<String>> =
        serde_json::from_str(&text).map_err(|e| DatasetError::Malformed {
            line: e.line(),
            image: String::new(),
            message: e.to_string(),
        })?;
    PredicateMap::new(entries)
}
