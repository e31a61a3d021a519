#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "lhcn/manifest.hpp"

using namespace lhcn;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("manifest file parses keys, comments, and blank lines") {
    const auto path = write_temp("lhcn_manifest_ok.txt",
                                 "# a comment\n"
                                 "content = data/x.content\n"
                                 "cites = data/x.cites   # trailing comment\n"
                                 "\n"
                                 "hidden1 = 64\n"
                                 "base_lr = 0.02\n"
                                 "loss_mode = mean\n"
                                 "float32 = true\n"
                                 "seeds = 3\n");
    const RunManifest m = RunManifest::from_file(path);
    CHECK(m.content == "data/x.content");
    CHECK(m.cites == "data/x.cites");
    CHECK(m.train.hidden1 == 64);
    CHECK(m.train.base_lr == 0.02);
    CHECK(m.train.loss_mean);
    CHECK(m.train.float32);
    CHECK(m.seeds == 3);
    CHECK(m.train.hidden2 == 16);  // untouched default
}

TEST_CASE("manifest parse errors carry the line number") {
    const auto bad_key = write_temp("lhcn_manifest_badkey.txt", "contentt = x\n");
    CHECK_THROWS_WITH_AS(RunManifest::from_file(bad_key), doctest::Contains(":1"), Error);

    const auto bad_value = write_temp("lhcn_manifest_badval.txt", "content = x\nepochs = soon\n");
    CHECK_THROWS_WITH_AS(RunManifest::from_file(bad_value), doctest::Contains(":2"), Error);

    const auto no_eq = write_temp("lhcn_manifest_noeq.txt", "just words\n");
    CHECK_THROWS_AS(RunManifest::from_file(no_eq), Error);
}

TEST_CASE("apply overrides previously set values") {
    RunManifest m;
    m.apply("content", "a.content");
    m.apply("cites", "a.cites");
    m.apply("epochs", "300");
    CHECK(m.train.epochs == 300);
    m.apply("epochs", "400");  // a CLI flag overriding the file value
    CHECK(m.train.epochs == 400);
    CHECK_THROWS_AS(m.apply("loss_mode", "median"), Error);
    CHECK_THROWS_AS(m.apply("cites_order", "alphabetical"), Error);
    CHECK_THROWS_AS(m.apply("dedup", "maybe"), Error);
}

TEST_CASE("serialized manifests parse back to the same settings") {
    RunManifest m;
    m.apply("content", "d.content");
    m.apply("incidence", "d.hyper");
    m.apply("train_fraction", "0.65");
    m.apply("split_seed", "123456789");
    m.apply("use_head", "false");
    m.apply("hidden2", "4");
    const auto path = write_temp("lhcn_manifest_rt.txt", m.to_text());
    const RunManifest back = RunManifest::from_file(path);
    CHECK(back.to_text() == m.to_text());
    CHECK(back.train.split.train_fraction == 0.65);
    CHECK(back.train.split.seed == 123456789);
    CHECK_FALSE(back.train.use_head);
}

TEST_CASE("validation rejects inconsistent manifests") {
    RunManifest none;
    CHECK_THROWS_AS(none.validate(), Error);  // no content

    RunManifest both;
    both.apply("content", "x");
    both.apply("cites", "y");
    both.apply("incidence", "z");
    CHECK_THROWS_AS(both.validate(), Error);  // two structure sources

    RunManifest bad_epochs;
    bad_epochs.apply("content", "x");
    bad_epochs.apply("cites", "y");
    bad_epochs.apply("epochs", "0");
    CHECK_THROWS_AS(bad_epochs.validate(), Error);

    RunManifest ok;
    ok.apply("content", "x");
    ok.apply("cites", "y");
    CHECK_NOTHROW(ok.validate());
}
