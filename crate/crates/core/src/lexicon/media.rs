/// Container formats accepted as sign assets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VideoFormat {
    Mp4,
    WebM,
}

impl VideoFormat {
    pub fn mime(self) -> &'static str {
        match self {
            VideoFormat::Mp4 => "video/mp4",
            VideoFormat::WebM => "video/webm",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            VideoFormat::Mp4 => "mp4",
            VideoFormat::WebM => "webm",
        }
    }
}

/// Identifies a video container from its leading bytes.
pub fn sniff_video(bytes: &[u8]) -> Option<VideoFormat> {
    if bytes.len() >= 8 && &bytes[4..8] == b"ftyp" {
        Some(VideoFormat::Mp4)
    } else if bytes.starts_with(&[0x1A, 0x45, 0xDF, 0xA3]) {
        Some(VideoFormat::WebM)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sniffing() {
        assert_eq!(sniff_video(b"\0\0\0\x18ftypisom"), Some(VideoFormat::Mp4));
        assert_eq!(sniff_video(&[0x1A, 0x45, 0xDF, 0xA3, 0x01]), Some(VideoFormat::WebM));
        assert_eq!(sniff_video(b"GIF89a..."), None);
        assert_eq!(sniff_video(b""), None);
    }
}
