#include "lhcn/manifest.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lhcn/exports.hpp"

namespace lhcn {

namespace {

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    fail(ErrorKind::parse, "manifest key '" + key + "': expected true/false, got '" + value + "'");
}

double parse_double(const std::string& value, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') {
        fail(ErrorKind::parse, "manifest key '" + key + "': expected a number, got '" + value + "'");
    }
    return v;
}

long parse_long(const std::string& value, const std::string& key) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') {
        fail(ErrorKind::parse,
             "manifest key '" + key + "': expected an integer, got '" + value + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') {
        fail(ErrorKind::parse,
             "manifest key '" + key + "': expected an unsigned integer, got '" + value + "'");
    }
    return v;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

}  // namespace

RunManifest RunManifest::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open manifest '" + path.string() + "'");
    RunManifest manifest;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            fail(ErrorKind::parse, path.string() + ":" + std::to_string(line_no) +
                                       ": expected 'key = value'");
        }
        try {
            manifest.apply(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
        } catch (const Error& e) {
            fail(e.kind(), path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return manifest;
}

void RunManifest::apply(const std::string& key, const std::string& value) {
    if (key == "content") content = value;
    else if (key == "cites") cites = value;
    else if (key == "incidence") incidence = value;
    else if (key == "cites_order") {
        if (value == "cited_first") cites_order = CitesOrder::cited_first;
        else if (value == "citing_first") cites_order = CitesOrder::citing_first;
        else fail(ErrorKind::parse, "cites_order must be cited_first or citing_first");
    }
    else if (key == "dedup") dedup = parse_bool(value, key);
    else if (key == "singleton_completion") singleton_completion = parse_bool(value, key);
    else if (key == "train_fraction") train.split.train_fraction = parse_double(value, key);
    else if (key == "split_seed") train.split.seed = parse_u64(value, key);
    else if (key == "init_seed") train.init_seed = parse_u64(value, key);
    else if (key == "hidden1") train.hidden1 = static_cast<int>(parse_long(value, key));
    else if (key == "hidden2") train.hidden2 = static_cast<int>(parse_long(value, key));
    else if (key == "epochs") train.epochs = static_cast<int>(parse_long(value, key));
    else if (key == "base_lr") train.base_lr = parse_double(value, key);
    else if (key == "lr_halving_period") {
        train.lr_halving_period = static_cast<int>(parse_long(value, key));
    }
    else if (key == "adam_beta1") train.adam_beta1 = parse_double(value, key);
    else if (key == "adam_beta2") train.adam_beta2 = parse_double(value, key);
    else if (key == "adam_eps") train.adam_eps = parse_double(value, key);
    else if (key == "leaky_slope") train.leaky_slope = parse_double(value, key);
    else if (key == "use_head") train.use_head = parse_bool(value, key);
    else if (key == "loss_mode") {
        if (value == "sum") train.loss_mean = false;
        else if (value == "mean") train.loss_mean = true;
        else fail(ErrorKind::parse, "loss_mode must be sum or mean");
    }
    else if (key == "dropout") train.dropout = parse_double(value, key);
    else if (key == "weight_decay") train.weight_decay = parse_double(value, key);
    else if (key == "float32") train.float32 = parse_bool(value, key);
    else if (key == "seeds") seeds = static_cast<int>(parse_long(value, key));
    else if (key == "out_dir") out_dir = value;
    else fail(ErrorKind::parse, "unknown manifest key '" + key + "'");
}

std::string RunManifest::to_text() const {
    std::ostringstream out;
    out << "content = " << content.string() << "\n";
    if (!cites.empty()) out << "cites = " << cites.string() << "\n";
    if (!incidence.empty()) out << "incidence = " << incidence.string() << "\n";
    out << "cites_order = "
        << (cites_order == CitesOrder::cited_first ? "cited_first" : "citing_first") << "\n"
        << "dedup = " << (dedup ? "true" : "false") << "\n"
        << "singleton_completion = " << (singleton_completion ? "true" : "false") << "\n"
        << "train_fraction = " << format_double(train.split.train_fraction) << "\n"
        << "split_seed = " << train.split.seed << "\n"
        << "init_seed = " << train.init_seed << "\n"
        << "hidden1 = " << train.hidden1 << "\n"
        << "hidden2 = " << train.hidden2 << "\n"
        << "epochs = " << train.epochs << "\n"
        << "base_lr = " << format_double(train.base_lr) << "\n"
        << "lr_halving_period = " << train.lr_halving_period << "\n"
        << "adam_beta1 = " << format_double(train.adam_beta1) << "\n"
        << "adam_beta2 = " << format_double(train.adam_beta2) << "\n"
        << "adam_eps = " << format_double(train.adam_eps) << "\n"
        << "leaky_slope = " << format_double(train.leaky_slope) << "\n"
        << "use_head = " << (train.use_head ? "true" : "false") << "\n"
        << "loss_mode = " << (train.loss_mean ? "mean" : "sum") << "\n"
        << "dropout = " << format_double(train.dropout) << "\n"
        << "weight_decay = " << format_double(train.weight_decay) << "\n"
        << "float32 = " << (train.float32 ? "true" : "false") << "\n"
        << "seeds = " << seeds << "\n"
        << "out_dir = " << out_dir.string() << "\n";
    return out.str();
}

void RunManifest::validate() const {
    if (content.empty()) fail(ErrorKind::validation, "a content file is required");
    if (cites.empty() == incidence.empty()) {
        fail(ErrorKind::validation, "exactly one of 'cites' or 'incidence' must be set");
    }
    if (seeds < 1) fail(ErrorKind::validation, "seeds must be >= 1");
    train.validate();
}

}  // namespace lhcn
