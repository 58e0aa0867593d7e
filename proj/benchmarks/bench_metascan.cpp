#include <benchmark/benchmark.h>

#include "metascan/id3.hpp"
#include "metascan/iptc.hpp"
#include "metascan/jpeg.hpp"
#include "metascan/metadata.hpp"
#include "metascan/mp4.hpp"
#include "metascan/payload.hpp"
#include "metascan/report.hpp"
#include "metascan/scan.hpp"

#include <random>
#include <string>

using namespace metascan;

namespace {

Bytes sample_jpeg(std::size_t entropy_len) {
    Bytes iptc;
    iptc.push_back(0x1C);
    iptc.push_back(2);
    iptc.push_back(105);
    put_u16be(iptc, 8);
    append(iptc, std::string("Headline"));

    Bytes app13;
    append(app13, std::string("Photoshop 3.0"));
    app13.push_back(0);
    append(app13, std::string("8BIM"));
    put_u16be(app13, 0x0404);
    put_u16be(app13, 0);
    put_u32be(app13, static_cast<std::uint32_t>(iptc.size()));
    append(app13, iptc);
    if (iptc.size() % 2 != 0)
        app13.push_back(0);

    Bytes out{0xFF, 0xD8, 0xFF, 0xED};
    put_u16be(out, static_cast<std::uint16_t>(app13.size() + 2));
    append(out, app13);
    Bytes sos{0x01, 0x01, 0x00, 0x00, 0x3F, 0x00};
    out.push_back(0xFF);
    out.push_back(0xDA);
    put_u16be(out, static_cast<std::uint16_t>(sos.size() + 2));
    append(out, sos);
    std::mt19937 rng(1);
    for (std::size_t i = 0; i < entropy_len; ++i)
        out.push_back(static_cast<std::uint8_t>(rng() % 0xFF)); // never 0xFF
    out.push_back(0xFF);
    out.push_back(0xD9);
    return out;
}

void bm_parse_jpeg(benchmark::State& state) {
    Bytes input = sample_jpeg(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(jpeg::parse_jpeg(input));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * input.size()));
}
BENCHMARK(bm_parse_jpeg)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);

void bm_roundtrip_jpeg(benchmark::State& state) {
    Bytes input = sample_jpeg(1 << 16);
    for (auto _ : state)
        benchmark::DoNotOptimize(jpeg::serialize_jpeg(jpeg::parse_jpeg(input)));
}
BENCHMARK(bm_roundtrip_jpeg);

void bm_set_metadata_jpeg(benchmark::State& state) {
    Bytes input = sample_jpeg(1 << 16);
    std::map<FieldKey, std::string> fields{
        {"iptc:2:105", "<img src=x onerror=\"alert(1)\">"}};
    for (auto _ : state)
        benchmark::DoNotOptimize(set_metadata(input, MediaFormat::Jpeg, fields));
}
BENCHMARK(bm_set_metadata_jpeg);

void bm_build_plan(benchmark::State& state) {
    auto catalog = payload::default_fields(MediaFormat::Jpeg);
    std::vector<payload::PayloadVector> vectors;
    for (int i = 0; i < static_cast<int>(state.range(0)); ++i)
        vectors.push_back({"v" + std::to_string(i),
                           "<svg onload=alert('{{M}}" + std::to_string(i) + "')>",
                           {}});
    for (auto _ : state)
        benchmark::DoNotOptimize(payload::build_plan(MediaFormat::Jpeg, {}, catalog, vectors,
                                                     payload::PlanMode::PerFieldAttributed,
                                                     "bench"));
}
BENCHMARK(bm_build_plan)->Arg(10)->Arg(200);

void bm_scan_js(benchmark::State& state) {
    std::string text;
    for (int i = 0; i < static_cast<int>(state.range(0)); ++i)
        text += "var v" + std::to_string(i) + " = compute(" + std::to_string(i) + ");\n";
    text += "el.innerHTML = document.location.hash;\n";
    auto rules = scan::default_rules();
    for (auto _ : state)
        benchmark::DoNotOptimize(scan::scan_js(text, rules, "bench.js"));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(bm_scan_js)->Arg(100)->Arg(1000);

void bm_aggregate(benchmark::State& state) {
    std::vector<report::SiteRecord> records;
    std::mt19937 rng(7);
    for (int i = 0; i < static_cast<int>(state.range(0)); ++i) {
        report::SiteRecord record;
        record.host = "host" + std::to_string(i);
        record.core_detected = rng() % 50 == 0;
        if (record.core_detected && rng() % 2)
            record.extensions.insert("JEvents");
        records.push_back(std::move(record));
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(report::aggregate(records, records.size()));
}
BENCHMARK(bm_aggregate)->Arg(1000)->Arg(100000);

} // namespace

BENCHMARK_MAIN();
