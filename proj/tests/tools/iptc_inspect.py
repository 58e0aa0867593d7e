#!/usr/bin/env python3
"""Independent IPTC reader: prints the value of record:dataset from a JPEG.

Usage: iptc_inspect.py FILE RECORD DATASET

Walks JPEG marker segments directly, collects every APP13 Photoshop 3.0
resource 0x0404, and decodes the IPTC-IIM stream. Shares no code with the
library under test.
"""
import struct
import sys


def marker_segments(data):
    if data[:2] != b"\xff\xd8":
        raise SystemExit("not a JPEG")
    pos = 2
    while pos + 1 < len(data):
        if data[pos] != 0xFF:
            raise SystemExit("bad marker at offset %d" % pos)
        marker = data[pos + 1]
        if marker == 0xFF:  # fill byte
            pos += 1
            continue
        pos += 2
        if marker == 0xD9:
            return
        if marker == 0x01 or 0xD0 <= marker <= 0xD7:
            continue
        (length,) = struct.unpack(">H", data[pos:pos + 2])
        payload = data[pos + 2:pos + length]
        yield marker, payload
        pos += length
        if marker == 0xDA:  # entropy-coded data follows; stop at EOI
            end = data.find(b"\xff\xd9", pos)
            if end < 0:
                raise SystemExit("no EOI")
            return


def photoshop_iptc(payload):
    prefix = b"Photoshop 3.0\x00"
    if not payload.startswith(prefix):
        return b""
    pos = len(prefix)
    out = b""
    while pos + 4 <= len(payload):
        if payload[pos:pos + 4] != b"8BIM":
            break
        pos += 4
        (resource_id,) = struct.unpack(">H", payload[pos:pos + 2])
        pos += 2
        name_len = payload[pos]
        pos += 1 + name_len
        if (1 + name_len) % 2:
            pos += 1
        (data_len,) = struct.unpack(">I", payload[pos:pos + 4])
        pos += 4
        block = payload[pos:pos + data_len]
        pos += data_len + (data_len % 2)
        if resource_id == 0x0404:
            out += block
    return out


def iptc_datasets(stream):
    pos = 0
    while pos + 5 <= len(stream):
        if stream[pos] != 0x1C:
            raise SystemExit("bad IPTC tag marker")
        record, dataset = stream[pos + 1], stream[pos + 2]
        (length,) = struct.unpack(">H", stream[pos + 3:pos + 5])
        if length & 0x8000:
            raise SystemExit("extended dataset not supported")
        pos += 5
        yield record, dataset, stream[pos:pos + length]
        pos += length


def main():
    if len(sys.argv) != 4:
        raise SystemExit(__doc__)
    path, want_record, want_dataset = sys.argv[1], int(sys.argv[2]), int(sys.argv[3])
    with open(path, "rb") as fh:
        data = fh.read()
    stream = b""
    for marker, payload in marker_segments(data):
        if marker == 0xED:
            stream += photoshop_iptc(payload)
    for record, dataset, value in iptc_datasets(stream):
        if record == want_record and dataset == want_dataset:
            sys.stdout.buffer.write(value)
            return
    raise SystemExit("dataset %d:%d not found" % (want_record, want_dataset))


if __name__ == "__main__":
    main()
