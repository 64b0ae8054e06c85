//! WAV decoding into normalized mono buffers, trimming, and PCM16 output.

use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use crate::error::{Error, Result};

/// Decoded mono audio at its native sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
    pub source_path: String,
}

impl AudioBuffer {
    pub fn new(
        samples: Vec<f64>,
        sample_rate: u32,
        source_path: impl Into<String>,
    ) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::invalid(
                "audio buffer",
                "sample rate must be positive",
            ));
        }
        if samples.is_empty() {
            return Err(Error::invalid("audio buffer", "no samples"));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::invalid(
                "audio buffer",
                format!("non-finite sample at index {i}"),
            ));
        }
        Ok(Self {
            samples,
            sample_rate,
            source_path: source_path.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// Decode a RIFF/WAVE file (PCM 16/24/32-bit integer or 32-bit float, one or
/// two channels) into a mono buffer. Channels are mixed by arithmetic mean;
/// integer samples are divided by 2^(bits-1).
pub fn decode_wav(path: impl AsRef<Path>) -> Result<AudioBuffer> {
    let path = path.as_ref();
    let reader = WavReader::open(path).map_err(|e| wav_error(path, e))?;
    let spec = reader.spec();

    let channels = spec.channels as usize;
    if !(1..=2).contains(&channels) {
        return Err(Error::UnsupportedFormat {
            path: path.to_path_buf(),
            detail: format!("{channels} channels"),
        });
    }

    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, bits @ (16 | 24 | 32)) => {
            let scale = (1u64 << (bits - 1)) as f64;
            reader
                .into_samples::<i32>()
                .map(|s| s.map(|v| v as f64 / scale))
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| wav_error(path, e))?
        }
        (SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| wav_error(path, e))?,
        (fmt, bits) => {
            return Err(Error::UnsupportedFormat {
                path: path.to_path_buf(),
                detail: format!("{bits}-bit {fmt:?}"),
            })
        }
    };

    let mut samples: Vec<f64> = interleaved
        .chunks_exact(channels)
        .map(|frame| frame.iter().sum::<f64>() / channels as f64)
        .collect();
    if samples.is_empty() {
        return Err(Error::EmptyAudio {
            path: path.to_path_buf(),
        });
    }
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::Wav {
            path: path.to_path_buf(),
            reason: "non-finite float samples".into(),
        });
    }

    // Float files may legally exceed full scale; bring them back into [-1, 1].
    let peak = samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if peak > 1.0 {
        samples.iter_mut().for_each(|s| *s /= peak);
    }

    AudioBuffer::new(samples, spec.sample_rate, path.display().to_string())
}

fn wav_error(path: &Path, err: hound::Error) -> Error {
    match err {
        hound::Error::IoError(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        hound::Error::Unsupported => Error::UnsupportedFormat {
            path: path.to_path_buf(),
            detail: "codec not supported (only linear PCM and IEEE float)".into(),
        },
        hound::Error::UnfinishedSample | hound::Error::InvalidSampleFormat => {
            Error::UnsupportedFormat {
                path: path.to_path_buf(),
                detail: err.to_string(),
            }
        }
        other => Error::Wav {
            path: path.to_path_buf(),
            reason: other.to_string(),
        },
    }
}

/// Write a mono buffer as 16-bit PCM. Samples are clamped to full scale and
/// quantized as round(x * 32768), so decoding reproduces them within 1/65536.
pub fn write_wav_pcm16(buffer: &AudioBuffer, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let spec = WavSpec {
        channels: 1,
        sample_rate: buffer.sample_rate,
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let mut writer = WavWriter::create(path, spec).map_err(|e| wav_error(path, e))?;
    for &s in &buffer.samples {
        let q = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        writer.write_sample(q).map_err(|e| wav_error(path, e))?;
    }
    writer.finalize().map_err(|e| wav_error(path, e))
}

/// Keep the half-open interval [start_s, end_s). Boundaries map to sample
/// indices by round(t * sample_rate).
pub fn trim(buffer: &AudioBuffer, start_s: f64, end_s: f64) -> Result<AudioBuffer> {
    if !(start_s.is_finite() && end_s.is_finite()) {
        return Err(Error::invalid("trim range", "non-finite bound"));
    }
    if start_s < 0.0 || start_s >= end_s {
        return Err(Error::invalid(
            "trim range",
            format!("[{start_s}, {end_s}) is empty or inverted"),
        ));
    }
    let sr = buffer.sample_rate as f64;
    let len = buffer.samples.len();
    let i0 = (start_s * sr).round() as usize;
    let i1 = (end_s * sr).round() as usize;
    if i1 > len {
        return Err(Error::invalid(
            "trim range",
            format!(
                "end {end_s} s exceeds duration {:.6} s",
                buffer.duration_s()
            ),
        ));
    }
    if i0 >= i1 {
        return Err(Error::invalid(
            "trim range",
            format!("[{start_s}, {end_s}) contains no samples"),
        ));
    }
    Ok(AudioBuffer {
        samples: buffer.samples[i0..i1].to_vec(),
        sample_rate: buffer.sample_rate,
        source_path: buffer.source_path.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_int(path: &Path, channels: u16, bits: u16, frames: &[Vec<i32>]) {
        let spec = WavSpec {
            channels,
            sample_rate: 44100,
            bits_per_sample: bits,
            sample_format: SampleFormat::Int,
        };
        let mut w = WavWriter::create(path, spec).unwrap();
        for frame in frames {
            for &s in frame {
                match bits {
                    16 => w.write_sample(s as i16).unwrap(),
                    _ => w.write_sample(s).unwrap(),
                }
            }
        }
        w.finalize().unwrap();
    }

    #[test]
    fn constant_16_bit_scales_to_half() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("half.wav");
        write_int(&path, 1, 16, &vec![vec![16384]; 44100]);
        let buf = decode_wav(&path).unwrap();
        assert_eq!(buf.len(), 44100);
        assert_eq!(buf.sample_rate, 44100);
        assert!(buf.samples.iter().all(|&s| (s - 0.5).abs() < 1e-12));
    }

    #[test]
    fn opposite_stereo_channels_mix_to_silence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stereo.wav");
        write_int(&path, 2, 16, &vec![vec![16384, -16384]; 1000]);
        let buf = decode_wav(&path).unwrap();
        assert_eq!(buf.len(), 1000);
        assert!(buf.samples.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn mixdown_is_channel_order_invariant() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.wav");
        let b = dir.path().join("b.wav");
        let frames: Vec<Vec<i32>> = (0..500)
            .map(|i| vec![i * 37 % 3000, -(i * 11 % 2000)])
            .collect();
        let swapped: Vec<Vec<i32>> = frames.iter().map(|f| vec![f[1], f[0]]).collect();
        write_int(&a, 2, 16, &frames);
        write_int(&b, 2, 16, &swapped);
        assert_eq!(
            decode_wav(&a).unwrap().samples,
            decode_wav(&b).unwrap().samples
        );
    }

    #[test]
    fn twenty_four_bit_full_scale() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s24.wav");
        write_int(&path, 1, 24, &[vec![1 << 22], vec![-(1 << 23)]]);
        let buf = decode_wav(&path).unwrap();
        assert_eq!(buf.samples, vec![0.5, -1.0]);
    }

    #[test]
    fn float_file_decodes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f32.wav");
        let spec = WavSpec {
            channels: 1,
            sample_rate: 48000,
            bits_per_sample: 32,
            sample_format: SampleFormat::Float,
        };
        let mut w = WavWriter::create(&path, spec).unwrap();
        for s in [0.25f32, -0.75, 0.0] {
            w.write_sample(s).unwrap();
        }
        w.finalize().unwrap();
        let buf = decode_wav(&path).unwrap();
        assert_eq!(buf.sample_rate, 48000);
        assert_eq!(buf.samples, vec![0.25, -0.75, 0.0]);
    }

    /// Minimal WAVE file with an arbitrary format tag, for codecs hound
    /// cannot write.
    fn raw_wav(format_tag: u16, bits: u16, data: &[u8]) -> Vec<u8> {
        let mut out = Vec::new();
        let block_align = bits / 8;
        out.extend_from_slice(b"RIFF");
        out.extend_from_slice(&(36 + data.len() as u32).to_le_bytes());
        out.extend_from_slice(b"WAVEfmt ");
        out.extend_from_slice(&16u32.to_le_bytes());
        out.extend_from_slice(&format_tag.to_le_bytes());
        out.extend_from_slice(&1u16.to_le_bytes());
        out.extend_from_slice(&8000u32.to_le_bytes());
        out.extend_from_slice(&(8000 * block_align as u32).to_le_bytes());
        out.extend_from_slice(&block_align.to_le_bytes());
        out.extend_from_slice(&bits.to_le_bytes());
        out.extend_from_slice(b"data");
        out.extend_from_slice(&(data.len() as u32).to_le_bytes());
        out.extend_from_slice(data);
        out
    }

    #[test]
    fn mu_law_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ulaw.wav");
        std::fs::write(&path, raw_wav(7, 8, &[0xff; 64])).unwrap();
        let err = decode_wav(&path).unwrap_err();
        assert!(matches!(err, Error::UnsupportedFormat { .. }), "{err}");
    }

    #[test]
    fn eight_bit_pcm_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u8.wav");
        std::fs::write(&path, raw_wav(1, 8, &[128; 64])).unwrap();
        assert!(matches!(
            decode_wav(&path).unwrap_err(),
            Error::UnsupportedFormat { .. }
        ));
    }

    #[test]
    fn zero_length_and_missing_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.wav");
        std::fs::write(&path, raw_wav(1, 16, &[])).unwrap();
        assert!(matches!(
            decode_wav(&path).unwrap_err(),
            Error::EmptyAudio { .. }
        ));
        let err = decode_wav(dir.path().join("nope.wav")).unwrap_err();
        assert!(err.is_io());
    }

    #[test]
    fn pcm16_roundtrip_within_one_lsb() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.wav");
        let samples: Vec<f64> = (0..4410)
            .map(|i| 0.9 * (2.0 * std::f64::consts::PI * 440.0 * i as f64 / 44100.0).sin())
            .collect();
        let buf = AudioBuffer::new(samples.clone(), 44100, "mem").unwrap();
        write_wav_pcm16(&buf, &path).unwrap();
        let back = decode_wav(&path).unwrap();
        assert_eq!(back.len(), samples.len());
        for (a, b) in samples.iter().zip(&back.samples) {
            assert!((a - b).abs() <= 1.0 / 32768.0);
        }
    }

    fn two_seconds() -> AudioBuffer {
        AudioBuffer::new(
            (0..88200).map(|i| i as f64 / 88200.0).collect(),
            44100,
            "ramp",
        )
        .unwrap()
    }

    #[test]
    fn identity_trim() {
        let b = two_seconds();
        assert_eq!(trim(&b, 0.0, 2.0).unwrap(), b);
    }

    #[test]
    fn one_second_trim_has_44100_samples() {
        let b = two_seconds();
        let t = trim(&b, 0.5, 1.5).unwrap();
        assert_eq!(t.len(), 44100);
        assert_eq!(t.sample_rate, 44100);
        assert_eq!(t.samples[0], b.samples[22050]);
    }

    #[test]
    fn bad_trims() {
        let b = two_seconds();
        assert!(trim(&b, 1.5, 1.0).is_err());
        assert!(trim(&b, 1.0, 1.0).is_err());
        assert!(trim(&b, -0.1, 1.0).is_err());
        assert!(trim(&b, 0.0, 2.5).is_err());
        assert!(trim(&b, 1.0, 1.0 + 1e-7).is_err());
    }

    #[test]
    fn buffer_invariants() {
        assert!(AudioBuffer::new(vec![], 44100, "x").is_err());
        assert!(AudioBuffer::new(vec![0.0], 0, "x").is_err());
        assert!(AudioBuffer::new(vec![f64::NAN], 44100, "x").is_err());
    }

    proptest::proptest! {
        #[test]
        fn trim_length_follows_rounding_rule(
            t0 in 0.0f64..1.9,
            len in 0.001f64..1.0,
        ) {
            let b = two_seconds();
            let t1 = (t0 + len).min(2.0);
            if let Ok(t) = trim(&b, t0, t1) {
                let exact = (t1 - t0) * 44100.0;
                proptest::prop_assert!((t.len() as f64 - exact).abs() <= 1.0);
            }
        }
    }
}
