#pragma once

#include "metascan/bytes.hpp"
#include "metascan/jpeg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace metascan::iptc {

/// One IPTC-IIM dataset. Wire form: 0x1C, record, dataset, u16be length,
/// payload. Only standard (2-byte length) datasets are supported.
struct IptcDataSet {
    std::uint8_t record = 2;
    std::uint8_t dataset = 0;
    Bytes payload;

    bool operator==(const IptcDataSet&) const = default;
};

/// Photoshop image resource block carried in an APP13 segment. Resource id
/// 0x0404 holds the IPTC-IIM stream.
struct PhotoshopResourceBlock {
    std::uint16_t resource_id = 0;
    std::string name; // Pascal-string content, without padding
    Bytes data;

    bool operator==(const PhotoshopResourceBlock&) const = default;
};

constexpr std::uint16_t kIptcResourceId = 0x0404;
constexpr std::size_t kMaxDatasetPayload = 32767;

Bytes encode_iptc_dataset(int record, int dataset, ByteView payload);

std::vector<IptcDataSet> decode_iptc_stream(ByteView data);

std::vector<PhotoshopResourceBlock> decode_resource_blocks(ByteView app13_payload);
Bytes encode_resource_blocks(const std::vector<PhotoshopResourceBlock>& blocks);

std::vector<IptcDataSet> get_iptc(const jpeg::JpegImage& image);
jpeg::JpegImage set_iptc(const jpeg::JpegImage& image, const std::vector<IptcDataSet>& datasets);

} // namespace metascan::iptc
