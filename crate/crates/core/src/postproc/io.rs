//! Scores file ingestion: the wire format between an external scorer and
//! the post-processing stage.
//!
//! Line-delimited JSON, one record per image:
//!
//! ```json
//! {"image_id": "x", "scores": [{"s": 0, "o": 1, "p": "sitting on", "score": 0.78}]}
//! ```
//!
//! Missing (pair, predicate) combinations are absent proposals, not zeros.

use super::ScoredTriplet;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScoresError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed scores record at line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("image `{image_id}`: proposal relates object {object} to itself")]
    SelfRelation { image_id: String, object: u32 },
    #[error("image `{image_id}`: non-finite score for ({s}, {p}, {o})")]
    NonFiniteScore {
        image_id: String,
        s: u32,
        p: String,
        o: u32,
    },
}

/// All proposals produced for one image.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageScores {
    pub image_id: String,
    pub scores: Vec<ScoredTriplet>,
}

#[derive(Serialize, Deserialize)]
struct ImageScoresDoc {
    image_id: String,
    scores: Vec<ScoreDoc>,
}

#[derive(Serialize, Deserialize)]
struct ScoreDoc {
    s: u32,
    o: u32,
    p: String,
    score: f64,
}

pub fn load_scores(path: impl AsRef<Path>) -> Result<Vec<ImageScores>, ScoresError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| ScoresError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| ScoresError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: ImageScoresDoc =
            serde_json::from_str(&line).map_err(|e| ScoresError::Malformed {
                line: line_no,
                message: e.to_string(),
            })?;
        let mut scores = Vec::with_capacity(doc.scores.len());
        for s in doc.scores {
            if s.s == s.o {
                return Err(ScoresError::SelfRelation {
                    image_id: doc.image_id.clone(),
                    object: s.s,
                });
            }
            if !s.score.is_finite() {
                return Err(ScoresError::NonFiniteScore {
                    image_id: doc.image_id.clone(),
                    s: s.s,
                    p: s.p,
                    o: s.o,
                });
            }
            scores.push(ScoredTriplet::new(s.s, s.p, s.o, s.score));
        }
        out.push(ImageScores {
            image_id: doc.image_id,
            scores,
        });
    }
    Ok(out)
}

pub fn save_scores(scores: &[ImageScores], mut writer: impl Write) -> Result<(), std::io::Error> {
    for image in scores {
        let doc = ImageScoresDoc {
            image_id: image.image_id.clone(),
            scores: image
                .scores
                .iter()
                .map(|s| ScoreDoc {
                    s: s.subject,
                    o: s.object,
                    p: s.predicate.clone(),
                    score: s.score,
                })
                .collect(),
        };
        serde_json::to_writer(&mut writer, &doc)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}
