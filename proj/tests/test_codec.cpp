#include <doctest.h>

#include <filesystem>
#include <set>
#include <sstream>
#include <tuple>

#include "stegano/codec.hpp"
#include "stegano/quality.hpp"
#include "stegano/roi.hpp"
#include "test_support.hpp"

using namespace stegano;
using testsup::random_bytes;
using testsup::random_video;

namespace {

Sidecar parse_str(const std::string& text) {
    std::istringstream in(text);
    return parse_sidecar(in);
}

// Returns true when U, V, and every Y sample not named by a record are
// byte-identical between cover and stego.
bool untouched_samples_match(const VideoSequence& cover, const VideoSequence& stego,
                             const Sidecar& sc) {
    std::set<std::tuple<std::uint32_t, int, int>> touched;
    for (const auto& rec : sc.records) touched.insert({rec.frame, rec.y, rec.x});

    for (std::size_t k = 0; k < cover.frames.size(); ++k) {
        if (cover.frames[k].u != stego.frames[k].u) return false;
        if (cover.frames[k].v != stego.frames[k].v) return false;
        for (int r = 0; r < cover.height; ++r) {
            for (int c = 0; c < cover.width; ++c) {
                if (touched.count({std::uint32_t(k), r, c})) continue;
                if (cover.luma(k, r, c) != stego.luma(k, r, c)) return false;
            }
        }
    }
    return true;
}

}  // namespace

TEST_CASE("allocate spreads ciphertext evenly") {
    SUBCASE("balanced chunks with a short tail") {
        const EmbedPlan plan = allocate(15872, 300, 10111);
        REQUIRE(plan.ranges.size() == 300);
        CHECK(plan.ranges[0] == ByteRange{0, 53});
        CHECK(plan.ranges[298] == ByteRange{15794, 15847});
        CHECK(plan.ranges[299] == ByteRange{15847, 15872});
        CHECK(plan.ranges[299].size() == 25);
    }

    SUBCASE("large payload chunk size") {
        const EmbedPlan plan = allocate(141312, 300, 10111);
        CHECK(plan.ranges[0].size() == 472);
        CHECK(plan.ranges[299].size() == 141312 - 299 * 472);
    }

    SUBCASE("ranges tile the payload exactly") {
        const EmbedPlan plan = allocate(1000, 7, 200);
        std::uint64_t expect = 0;
        for (const ByteRange& r : plan.ranges) {
            CHECK(r.begin == expect);
            expect = r.end;
        }
        CHECK(expect == 1000);
    }

    SUBCASE("more frames than bytes") {
        const EmbedPlan plan = allocate(3, 5, 100);
        CHECK(plan.ranges[2] == ByteRange{2, 3});
        CHECK(plan.ranges[3].size() == 0);
        CHECK(plan.ranges[4].size() == 0);
    }

    SUBCASE("empty payload never fails") {
        const EmbedPlan plan = allocate(0, 3, 0);
        for (const ByteRange& r : plan.ranges) CHECK(r.size() == 0);
    }

    SUBCASE("overflow reports the total capacity") {
        try {
            allocate(10000, 4, 100);
            FAIL("expected CapacityError");
        } catch (const CapacityError& e) {
            CHECK(std::string(e.what()).find("400") != std::string::npos);
        }
        CHECK_THROWS_AS(allocate(1, 0, 100), CapacityError);
        CHECK_THROWS_AS(allocate(1, -1, 100), ArgumentError);
    }
}

TEST_CASE("embed_payload round trip below the cipher") {
    const VideoSequence cover = random_video(32, 32, 3, 501);
    const auto payload = random_bytes(60, 502);
    std::array<std::uint8_t, 16> iv{};
    for (int i = 0; i < 16; ++i) iv[std::size_t(i)] = std::uint8_t(i + 1);

    EmbedOptions opts;
    opts.ga.seed = 9;
    const EmbedOutput out = embed_payload(cover, payload, iv, opts);

    CHECK(out.sidecar.width == 32);
    CHECK(out.sidecar.height == 32);
    CHECK(out.sidecar.frame_count == 3);
    CHECK(out.sidecar.payload_len == 60);
    CHECK(out.sidecar.iv == iv);
    REQUIRE(out.sidecar.records.size() == 60);

    SUBCASE("records stay in bounds, in frame order") {
        std::uint32_t last_frame = 0;
        for (const auto& rec : out.sidecar.records) {
            CHECK(rec.frame >= last_frame);
            last_frame = rec.frame;
            CHECK(rec.frame < 3);
            CHECK(rec.x >= 0);
            CHECK(rec.x < 32);
            CHECK(rec.y >= 0);
            CHECK(rec.y < 32);
        }
    }

    SUBCASE("payload and cover are recoverable") {
        CHECK(extract_payload(out.stego, out.sidecar) == payload);
        CHECK(restore(out.stego, out.sidecar) == cover);
    }

    SUBCASE("only recorded samples change") {
        CHECK(untouched_samples_match(cover, out.stego, out.sidecar));
    }

    SUBCASE("empty payload is a no-op") {
        const EmbedOutput none = embed_payload(cover, {}, iv, opts);
        CHECK(none.stego == cover);
        CHECK(none.sidecar.records.empty());
        CHECK(extract_payload(none.stego, none.sidecar).empty());
    }
}

TEST_CASE("embed and extract through the cipher") {
    const VideoSequence cover = random_video(48, 32, 4, 77);
    const auto secret = random_bytes(300, 78);

    EmbedOptions opts;
    opts.ga.seed = 13;
    const EmbedOutput out = embed(cover, secret, "hunter2", opts);

    CHECK(out.sidecar.payload_len == 304);  // padded to the next block
    CHECK(extract(out.stego, out.sidecar, "hunter2") == secret);
    CHECK(restore(out.stego, out.sidecar) == cover);
    CHECK(untouched_samples_match(cover, out.stego, out.sidecar));

    CHECK_THROWS_AS(extract(out.stego, out.sidecar, "hunter3"), IntegrityError);

    SUBCASE("empty secret still produces one padding block") {
        const EmbedOutput none = embed(cover, {}, "hunter2", opts);
        CHECK(none.sidecar.payload_len == 16);
        CHECK(extract(none.stego, none.sidecar, "hunter2").empty());
    }
}

TEST_CASE("embed_direct writes bytes verbatim") {
    const VideoSequence cover = random_video(48, 32, 2, 31);
    const auto secret = random_bytes(100, 32);

    EmbedOptions opts;
    opts.ga.seed = 5;
    const EmbedOutput direct = embed_direct(cover, secret, "pw", opts);

    for (const auto& rec : direct.sidecar.records) {
        CHECK(rec.delta_extract == 0);  // stego sample equals the byte
    }
    CHECK(extract(direct.stego, direct.sidecar, "pw") == secret);
    CHECK(restore(direct.stego, direct.sidecar) == cover);

    const EmbedOutput searched = embed(cover, secret, "pw", opts);
    const double direct_psnr = psnr_series(cover, direct.stego).aggregate_psnr;
    const double searched_psnr = psnr_series(cover, searched.stego).aggregate_psnr;
    CHECK(searched_psnr >= direct_psnr);
}

TEST_CASE("embedding is deterministic in the seed") {
    const VideoSequence cover = random_video(64, 48, 3, 90);
    const auto secret = random_bytes(256, 91);

    EmbedOptions opts;
    opts.ga.seed = 1234;
    const EmbedOutput a = embed(cover, secret, "pw", opts);
    const EmbedOutput b = embed(cover, secret, "pw", opts);
    CHECK(a.stego == b.stego);
    CHECK(a.sidecar == b.sidecar);

    opts.ga.seed = 1235;
    const EmbedOutput c = embed(cover, secret, "pw", opts);
    CHECK(c.sidecar.iv != a.sidecar.iv);
}

TEST_CASE("parallel embedding matches serial byte for byte") {
    const VideoSequence cover = random_video(64, 64, 9, 140);
    const auto secret = random_bytes(900, 141);

    EmbedOptions serial;
    serial.ga.seed = 77;
    serial.jobs = 1;
    EmbedOptions parallel = serial;
    parallel.jobs = 4;

    const EmbedOutput a = embed(cover, secret, "pw", serial);
    const EmbedOutput b = embed(cover, secret, "pw", parallel);
    CHECK(a.stego == b.stego);
    CHECK(a.sidecar == b.sidecar);
    CHECK(testsup::y4m_bytes(a.stego) == testsup::y4m_bytes(b.stego));
    CHECK(testsup::sidecar_bytes(a.sidecar) == testsup::sidecar_bytes(b.sidecar));
}

TEST_CASE("oversized payloads are refused up front") {
    const VideoSequence cover = random_video(16, 16, 2, 9);
    const auto secret = random_bytes(4096, 10);
    CHECK_THROWS_AS(embed(cover, secret, "pw", {}), CapacityError);

    VideoSequence empty = cover;
    empty.frames.clear();
    CHECK_THROWS_AS(embed(empty, random_bytes(4, 2), "pw", {}), CapacityError);
}

TEST_CASE("sidecar serialization format") {
    Sidecar sc;
    sc.width = 32;
    sc.height = 16;
    sc.frame_count = 2;
    sc.payload_len = 2;
    for (int i = 0; i < 16; ++i) sc.iv[std::size_t(i)] = std::uint8_t(16 * i + i);
    sc.records.push_back({0, 5, 3, 0, -3});
    sc.records.push_back({1, 31, 15, 255, -255});

    const std::string text = testsup::sidecar_bytes(sc);
    CHECK(text ==
          "#SGV1,w=32,h=16,f=2,len=2,iv=00112233445566778899aabbccddeeff\n"
          "frame,x,y,de,dr\n"
          "0,5,3,0,-3\n"
          "1,31,15,255,-255\n");

    CHECK(parse_str(text) == sc);
}

TEST_CASE("sidecar writer validates the record count") {
    Sidecar sc;
    sc.width = sc.height = 4;
    sc.frame_count = 1;
    sc.payload_len = 2;  // but no records
    std::ostringstream out;
    CHECK_THROWS_AS(write_sidecar(sc, out), ArgumentError);
}

TEST_CASE("sidecar parser rejects malformed input") {
    const std::string good =
        "#SGV1,w=4,h=4,f=1,len=1,iv=000102030405060708090a0b0c0d0e0f\n"
        "frame,x,y,de,dr\n"
        "0,1,1,4,-4\n";
    CHECK(parse_str(good).records.size() == 1);

    CHECK_THROWS_AS(parse_str(""), FormatError);
    CHECK_THROWS_AS(parse_str("frame,x,y\n"), FormatError);                      // no magic
    CHECK_THROWS_AS(parse_str("#SGV2,w=4,h=4,f=1,len=0,iv=0\n"), FormatError);   // version
    CHECK_THROWS_AS(parse_str("#SGV1\n"), FormatError);                          // no fields
    CHECK_THROWS_AS(parse_str("#SGV1,h=4,w=4,f=1,len=0,iv=0\n"), FormatError);   // order fixed

    auto mutate_line = [&](const std::string& from, const std::string& to) {
        std::string text = good;
        const auto at = text.find(from);
        REQUIRE(at != std::string::npos);
        text.replace(at, from.size(), to);
        return text;
    };

    // iv must be exactly 32 lowercase hex digits.
    CHECK_THROWS_AS(parse_str(mutate_line("iv=000102030405060708090a0b0c0d0e0f",
                                          "iv=000102030405060708090a0b0c0d0e")),
                    FormatError);
    CHECK_THROWS_AS(parse_str(mutate_line("iv=000102030405060708090a0b0c0d0e0f",
                                          "iv=000102030405060708090A0B0C0D0E0F")),
                    FormatError);

    CHECK_THROWS_AS(parse_str(mutate_line("frame,x,y,de,dr", "frame,x,y")), FormatError);
    CHECK_THROWS_AS(parse_str(mutate_line("0,1,1,4,-4", "0,1,1,4")), FormatError);
    CHECK_THROWS_AS(parse_str(mutate_line("0,1,1,4,-4", "0,1,1,4,-4,9")), FormatError);
    CHECK_THROWS_AS(parse_str(mutate_line("0,1,1,4,-4", "a,b,c,d,e")), FormatError);
    CHECK_THROWS_AS(parse_str(mutate_line("0,1,1,4,-4", "0,4,1,4,-4")), FormatError);   // x == w
    CHECK_THROWS_AS(parse_str(mutate_line("0,1,1,4,-4", "1,1,1,4,-4")), FormatError);   // frame == f
    CHECK_THROWS_AS(parse_str(mutate_line("0,1,1,4,-4", "0,1,1,300,-4")), FormatError); // delta
    CHECK_THROWS_AS(parse_str(mutate_line("len=1", "len=2")), FormatError);  // count mismatch
}

TEST_CASE("sidecar file helpers round trip atomically") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "stegano_codec_test";
    fs::create_directories(dir);

    const VideoSequence cover = random_video(32, 32, 2, 61);
    const EmbedOutput out = embed(cover, random_bytes(50, 62), "pw", {});

    const std::string path = (dir / "map.csv").string();
    save_sidecar_file(out.sidecar, path);
    CHECK(load_sidecar_file(path) == out.sidecar);
    CHECK(!fs::exists(path + ".tmp"));

    CHECK_THROWS_AS(load_sidecar_file((dir / "absent.csv").string()), IoError);
    fs::remove_all(dir);
}

TEST_CASE("extract and restore validate their inputs") {
    const VideoSequence cover = random_video(32, 32, 2, 71);
    const EmbedOutput out = embed(cover, random_bytes(40, 72), "pw", {});

    SUBCASE("dimension mismatch") {
        const VideoSequence other = random_video(16, 16, 2, 73);
        CHECK_THROWS_AS(extract_payload(other, out.sidecar), FormatError);
        CHECK_THROWS_AS(restore(other, out.sidecar), FormatError);
    }

    SUBCASE("frame count mismatch") {
        VideoSequence shorter = out.stego;
        shorter.frames.pop_back();
        CHECK_THROWS_AS(extract_payload(shorter, out.sidecar), FormatError);
    }

    SUBCASE("reconstruction out of range") {
        Sidecar bad = out.sidecar;
        const int sample = out.stego.luma(bad.records[0].frame, bad.records[0].y, bad.records[0].x);
        bad.records[0].delta_extract = 255 - sample + 1;
        CHECK_THROWS_AS(extract_payload(out.stego, bad), IntegrityError);

        bad = out.sidecar;
        bad.records[0].delta_restore = -sample - 1;
        CHECK_THROWS_AS(restore(out.stego, bad), IntegrityError);
    }
}
