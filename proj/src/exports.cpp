#include "lhcn/exports.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lhcn {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot write '" + path.string() + "'");
    out << content;
    if (!out) fail(ErrorKind::io, "short write to '" + path.string() + "'");
}

void write_edge_list(const std::filesystem::path& path, const CsrMatrix& adjacency) {
    std::ostringstream out;
    const auto& indptr = adjacency.indptr();
    const auto& indices = adjacency.indices();
    const auto& values = adjacency.values();
    for (std::size_t p = 0; p < adjacency.rows(); ++p) {
        for (std::size_t k = indptr[p]; k < indptr[p + 1]; ++k) {
            const auto q = static_cast<std::size_t>(indices[k]);
            if (q <= p) continue;  // one line per undirected edge
            out << p << ' ' << q << ' ' << format_double(values[k]) << '\n';
        }
    }
    write_text_file(path, out.str());
}

void write_line_features(const std::filesystem::path& path, const Matrix& features) {
    std::ostringstream out;
    for (std::size_t p = 0; p < features.rows(); ++p) {
        out << p;
        const double* row = features.row(p);
        for (std::size_t j = 0; j < features.cols(); ++j) out << '\t' << format_double(row[j]);
        out << '\n';
    }
    write_text_file(path, out.str());
}

void write_line_labels(const std::filesystem::path& path, const std::vector<int>& labels,
                       const std::vector<std::string>& classes) {
    std::ostringstream out;
    for (std::size_t p = 0; p < labels.size(); ++p) {
        out << p << '\t';
        const int cls = labels[p];
        if (cls < 0) {
            out << "NA";
        } else if (static_cast<std::size_t>(cls) < classes.size()) {
            out << classes[static_cast<std::size_t>(cls)];
        } else {
            out << cls;
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

void write_run_report_csv(const std::filesystem::path& path, const RunReport& report) {
    std::ostringstream out;
    out << "epoch,loss,lr\n";
    for (std::size_t e = 0; e < report.loss.size(); ++e) {
        out << e << ',' << format_double(report.loss[e]) << ',' << format_double(report.lr[e])
            << '\n';
    }
    write_text_file(path, out.str());
}

void write_predictions(const std::filesystem::path& path, const Hypergraph& h,
                       const std::vector<int>& node_preds, const Split& split) {
    std::vector<char> in_train(static_cast<std::size_t>(h.n), 0);
    std::vector<char> in_test(static_cast<std::size_t>(h.n), 0);
    for (int v : split.train) in_train[static_cast<std::size_t>(v)] = 1;
    for (int v : split.test) in_test[static_cast<std::size_t>(v)] = 1;

    const auto class_name = [&](int cls) -> std::string {
        if (cls < 0) return "NA";
        if (static_cast<std::size_t>(cls) < h.labels.classes.size()) {
            return h.labels.classes[static_cast<std::size_t>(cls)];
        }
        return std::to_string(cls);
    };

    std::ostringstream out;
    out << "node_id\tpredicted_class\ttrue_class\tsplit\n";
    for (int v = 0; v < h.n; ++v) {
        out << h.node_ids[static_cast<std::size_t>(v)] << '\t'
            << class_name(node_preds[static_cast<std::size_t>(v)]) << '\t'
            << class_name(h.labels.class_of(v)) << '\t';
        if (in_train[static_cast<std::size_t>(v)]) out << "train";
        else if (in_test[static_cast<std::size_t>(v)]) out << "test";
        else out << "none";
        out << '\n';
    }
    write_text_file(path, out.str());
}

void write_embeddings(const std::filesystem::path& path, const Hypergraph& h,
                      const Matrix& node_embeddings) {
    std::ostringstream out;
    out << "node_id";
    for (std::size_t j = 0; j < node_embeddings.cols(); ++j) out << "\tdim_" << j;
    out << '\n';
    for (int v = 0; v < h.n; ++v) {
        out << h.node_ids[static_cast<std::size_t>(v)];
        const double* row = node_embeddings.row(static_cast<std::size_t>(v));
        for (std::size_t j = 0; j < node_embeddings.cols(); ++j) {
            out << '\t' << format_double(row[j]);
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

namespace {

void write_matrix_block(std::ostringstream& out, const char* name, const Matrix& mat) {
    out << name << ' ' << mat.rows() << ' ' << mat.cols() << '\n';
    for (std::size_t r = 0; r < mat.rows(); ++r) {
        const double* row = mat.row(r);
        for (std::size_t c = 0; c < mat.cols(); ++c) {
            if (c > 0) out << ' ';
            out << format_double(row[c]);
        }
        out << '\n';
    }
}

Matrix read_matrix_block(std::istream& in, const std::string& expected_name,
                         const std::filesystem::path& path) {
    std::string name;
    std::size_t rows = 0, cols = 0;
    if (!(in >> name >> rows >> cols) || name != expected_name) {
        fail(ErrorKind::parse,
             "checkpoint '" + path.string() + "': expected matrix block '" + expected_name + "'");
    }
    Matrix mat(rows, cols);
    for (double& v : mat.data()) {
        if (!(in >> v)) {
            fail(ErrorKind::parse, "checkpoint '" + path.string() + "': truncated matrix '" +
                                       expected_name + "'");
        }
    }
    return mat;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const GcnModel& model,
                     const std::vector<std::string>& classes, const RunManifest& manifest) {
    std::ostringstream out;
    out << "lhcn_checkpoint 1\n";
    out << "has_head " << (model.has_head ? 1 : 0) << '\n';
    out << "leaky_slope " << format_double(model.leaky_slope) << '\n';
    out << "classes " << classes.size() << '\n';
    for (const auto& c : classes) out << c << '\n';
    write_matrix_block(out, "theta1", model.theta1);
    write_matrix_block(out, "theta2", model.theta2);
    if (model.has_head) write_matrix_block(out, "w_out", model.w_out);
    out << "manifest\n" << manifest.to_text();
    write_text_file(path, out.str());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open checkpoint '" + path.string() + "'");
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "lhcn_checkpoint" || version != 1) {
        fail(ErrorKind::parse, "'" + path.string() + "' is not a version-1 checkpoint");
    }
    Checkpoint ckpt;
    std::string key;
    int has_head = 0;
    std::size_t num_classes = 0;
    if (!(in >> key >> has_head) || key != "has_head") {
        fail(ErrorKind::parse, "checkpoint '" + path.string() + "': missing has_head");
    }
    if (!(in >> key >> ckpt.model.leaky_slope) || key != "leaky_slope") {
        fail(ErrorKind::parse, "checkpoint '" + path.string() + "': missing leaky_slope");
    }
    if (!(in >> key >> num_classes) || key != "classes") {
        fail(ErrorKind::parse, "checkpoint '" + path.string() + "': missing classes");
    }
    ckpt.classes.resize(num_classes);
    for (auto& c : ckpt.classes) {
        if (!(in >> c)) fail(ErrorKind::parse, "checkpoint '" + path.string() + "': truncated class list");
    }
    ckpt.model.has_head = has_head != 0;
    ckpt.model.theta1 = read_matrix_block(in, "theta1", path);
    ckpt.model.theta2 = read_matrix_block(in, "theta2", path);
    if (ckpt.model.has_head) ckpt.model.w_out = read_matrix_block(in, "w_out", path);

    if (!(in >> key) || key != "manifest") {
        fail(ErrorKind::parse, "checkpoint '" + path.string() + "': missing manifest section");
    }
    std::string line;
    std::getline(in, line);  // rest of the marker line
    std::string manifest_text;
    while (std::getline(in, line)) manifest_text += line + "\n";
    std::istringstream manifest_in(manifest_text);
    long line_no = 0;
    while (std::getline(manifest_in, line)) {
        ++line_no;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        ckpt.manifest.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return ckpt;
}

}  // namespace lhcn
