//! Minimal SMF reader, written independently of the encoder, used to check
//! that emitted files decode to the intended notes.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedFile {
    pub format: u16,
    pub division: u16,
    pub tracks: Vec<ParsedTrack>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedTrack {
    pub name: Option<String>,
    /// (channel, pitch, onset tick, duration ticks), sorted.
    pub notes: Vec<(u8, u8, u32, u32)>,
    pub tempo: Option<u32>,
    pub time_signature: Option<[u8; 4]>,
    /// Absolute tick of each event, in file order.
    pub event_ticks: Vec<u32>,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> &'a [u8] {
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        s
    }

    fn byte(&mut self) -> u8 {
        self.take(1)[0]
    }

    fn be(&mut self, n: usize) -> u32 {
        self.take(n).iter().fold(0u32, |acc, &b| (acc << 8) | u32::from(b))
    }

    fn vlq(&mut self) -> u32 {
        let mut v = 0u32;
        loop {
            let b = self.byte();
            v = (v << 7) | u32::from(b & 0x7F);
            if b & 0x80 == 0 {
                return v;
            }
        }
    }
}

pub fn parse(bytes: &[u8]) -> Result<ParsedFile, String> {
    let mut c = Cursor { bytes, pos: 0 };
    if c.take(4) != b"MThd" {
        return Err("missing MThd".into());
    }
    let len = c.be(4) as usize;
    let format = c.be(2) as u16;
    let ntracks = c.be(2) as usize;
    let division = c.be(2) as u16;
    c.take(len - 6);
    let mut tracks = Vec::new();
    for _ in 0..ntracks {
        if c.take(4) != b"MTrk" {
            return Err("missing MTrk".into());
        }
        let len = c.be(4) as usize;
        let end = c.pos + len;
        tracks.push(parse_track(&mut c, end)?);
        if c.pos != end {
            return Err("track length mismatch".into());
        }
    }
    if c.pos != bytes.len() {
        return Err("trailing bytes".into());
    }
    Ok(ParsedFile { format, division, tracks })
}

fn parse_track(c: &mut Cursor, end: usize) -> Result<ParsedTrack, String> {
    let mut track = ParsedTrack::default();
    let mut tick = 0u32;
    let mut running = 0u8;
    let mut open: std::collections::HashMap<(u8, u8), Vec<u32>> = Default::default();
    let mut ended = false;
    while c.pos < end {
        tick += c.vlq();
        track.event_ticks.push(tick);
        let mut status = c.byte();
        let first_data = if status & 0x80 == 0 {
            let d = status;
            status = running;
            Some(d)
        } else {
            None
        };
        match status {
            0xFF => {
                let kind = c.byte();
                let len = c.vlq() as usize;
                let data = c.take(len);
                match kind {
                    0x03 => track.name = Some(String::from_utf8_lossy(data).into_owned()),
                    0x51 => track.tempo = Some(data.iter().fold(0, |a, &b| (a << 8) | u32::from(b))),
                    0x58 => track.time_signature = Some([data[0], data[1], data[2], data[3]]),
                    0x2F => ended = true,
                    _ => {}
                }
            }
            0xF0 | 0xF7 => {
                let len = c.vlq() as usize;
                c.take(len);
            }
            s if s & 0xF0 == 0x80 || s & 0xF0 == 0x90 => {
                running = s;
                let pitch = first_data.unwrap_or_else(|| c.byte());
                let velocity = c.byte();
                let ch = s & 0x0F;
                if s & 0xF0 == 0x90 && velocity > 0 {
                    open.entry((ch, pitch)).or_default().push(tick);
                } else {
                    let starts = open.get_mut(&(ch, pitch)).ok_or("note-off without note-on")?;
                    if starts.is_empty() {
                        return Err("note-off without note-on".into());
                    }
                    let on = starts.remove(0);
                    track.notes.push((ch, pitch, on, tick - on));
                }
            }
            s if (0xA0..0xF0).contains(&s) => {
                running = s;
                let n = if matches!(s & 0xF0, 0xC0 | 0xD0) { 1 } else { 2 };
                let already = usize::from(first_data.is_some());
                c.take(n - already);
            }
            other => return Err(format!("unexpected status {other:#x}")),
        }
    }
    if !ended {
        return Err("track without end-of-track".into());
    }
    if open.values().any(|v| !v.is_empty()) {
        return Err("unterminated note".into());
    }
    track.notes.sort();
    Ok(track)
}
