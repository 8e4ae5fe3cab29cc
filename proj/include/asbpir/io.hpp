#pragma once

// Matrix files and request specs.
//
// Text format: optional '#' comment lines, a header `q p e k n`, then k rows
// of n integer-encoded entries. A JSON mirror carries the same fields; the
// reader switches on the first non-space byte.

#include "asbpir/matrix.hpp"
#include "asbpir/recovery.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace asbpir {

struct MatrixFile {
    int p = 0, e = 0;
    int k = 0, n = 0;
    std::vector<int> entries;  // row-major encodings
    std::string name;          // optional, carried in comments / JSON field

    int q() const {
        int v = 1;
        for (int i = 0; i < e; ++i) v *= p;
        return v;
    }
};

inline MatrixFile matrix_file_from(const GeneratorMatrix& g, std::string name = "") {
    MatrixFile mf;
    mf.p = g.field().p();
    mf.e = g.field().e();
    mf.k = g.k();
    mf.n = g.n();
    mf.name = std::move(name);
    mf.entries.reserve(static_cast<size_t>(mf.k) * mf.n);
    for (int i = 0; i < mf.k; ++i)
        for (int j = 0; j < mf.n; ++j) mf.entries.push_back(g.mat().at(i, j));
    return mf;
}

// Validates ranges and rank (GeneratorMatrix rejects rank-deficient input).
inline GeneratorMatrix to_generator(const MatrixFile& mf) {
    if (mf.k < 1 || mf.n < mf.k) throw std::invalid_argument("matrix file: bad dimensions");
    if (static_cast<int>(mf.entries.size()) != mf.k * mf.n)
        throw std::invalid_argument("matrix file: entry count mismatch");
    const Field& f = Field::get(mf.p, mf.e);
    Matrix m(f, mf.k, mf.n);
    for (int i = 0; i < mf.k; ++i)
        for (int j = 0; j < mf.n; ++j) {
            const int v = mf.entries[static_cast<size_t>(i) * mf.n + j];
            if (v < 0 || v >= f.q()) throw std::invalid_argument("matrix file: entry out of range");
            m.set(i, j, static_cast<uint8_t>(v));
        }
    return GeneratorMatrix(std::move(m));
}

inline std::string write_matrix_text(const MatrixFile& mf) {
    std::ostringstream out;
    if (!mf.name.empty()) out << "# " << mf.name << "\n";
    out << mf.q() << " " << mf.p << " " << mf.e << " " << mf.k << " " << mf.n << "\n";
    for (int i = 0; i < mf.k; ++i) {
        for (int j = 0; j < mf.n; ++j) {
            if (j) out << " ";
            out << mf.entries[static_cast<size_t>(i) * mf.n + j];
        }
        out << "\n";
    }
    return out.str();
}

inline MatrixFile read_matrix_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    MatrixFile mf;
    int q = 0;
    bool header_done = false;
    std::vector<int> nums;
    while (std::getline(in, line)) {
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#') {
            if (mf.name.empty()) {
                std::string c = line.substr(pos + 1);
                size_t b = c.find_first_not_of(" \t");
                if (b != std::string::npos) mf.name = c.substr(b);
            }
            continue;
        }
        std::istringstream ls(line);
        if (!header_done) {
            if (!(ls >> q >> mf.p >> mf.e >> mf.k >> mf.n))
                throw std::invalid_argument("matrix file: malformed header");
            std::string extra;
            if (ls >> extra) throw std::invalid_argument("matrix file: malformed header");
            header_done = true;
            continue;
        }
        int v;
        while (ls >> v) nums.push_back(v);
    }
    if (!header_done) throw std::invalid_argument("matrix file: missing header");
    if (mf.p < 2 || mf.e < 1 || q != mf.q())
        throw std::invalid_argument("matrix file: header q does not match p^e");
    mf.entries = std::move(nums);
    if (static_cast<int>(mf.entries.size()) != mf.k * mf.n)
        throw std::invalid_argument("matrix file: entry count mismatch");
    return mf;
}

inline nlohmann::json matrix_file_to_json(const MatrixFile& mf) {
    nlohmann::json j{{"field", {{"p", mf.p}, {"e", mf.e}}},
                     {"k", mf.k},
                     {"n", mf.n},
                     {"entries", mf.entries}};
    if (!mf.name.empty()) j["name"] = mf.name;
    return j;
}

inline MatrixFile matrix_file_from_json(const nlohmann::json& j) {
    MatrixFile mf;
    mf.p = j.at("field").at("p").get<int>();
    mf.e = j.at("field").at("e").get<int>();
    mf.k = j.at("k").get<int>();
    mf.n = j.at("n").get<int>();
    mf.entries = j.at("entries").get<std::vector<int>>();
    if (j.contains("name")) mf.name = j.at("name").get<std::string>();
    return mf;
}

inline MatrixFile read_matrix_auto(const std::string& text) {
    size_t pos = text.find_first_not_of(" \t\r\n");
    if (pos != std::string::npos && text[pos] == '{')
        return matrix_file_from_json(nlohmann::json::parse(text));
    return read_matrix_text(text);
}

inline MatrixFile load_matrix_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_matrix_auto(buf.str());
}

inline void save_matrix_file(const std::string& path, const MatrixFile& mf, bool as_json = false) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
    if (as_json)
        out << matrix_file_to_json(mf).dump(2) << "\n";
    else
        out << write_matrix_text(mf);
}

// One request token: TARGET or TARGET:MULT. TARGET is a 1-based column index
// (bare integer), a comma-separated coordinate vector, "0"/"0-vector" for the
// zero target, or "v=..." to force vector parsing.
inline RequestItem parse_request_token(const std::string& token, const GeneratorMatrix& g) {
    std::string target = token;
    int mult = 1;
    const size_t colon = token.rfind(':');
    if (colon != std::string::npos) {
        target = token.substr(0, colon);
        const std::string ms = token.substr(colon + 1);
        try {
            size_t used = 0;
            mult = std::stoi(ms, &used);
            if (used != ms.size()) throw std::invalid_argument("");
        } catch (...) {
            throw std::invalid_argument("request: bad multiplicity in '" + token + "'");
        }
        if (mult < 1) throw std::invalid_argument("request: multiplicity must be >= 1");
    }
    if (target.empty()) throw std::invalid_argument("request: empty target in '" + token + "'");

    bool forced_vector = false;
    if (target.rfind("v=", 0) == 0) {
        forced_vector = true;
        target = target.substr(2);
    }
    if (!forced_vector && (target == "0" || target == "0-vector"))
        return RequestItem{Vec(g.k(), 0), mult};

    auto parse_int = [&](const std::string& s) {
        try {
            size_t used = 0;
            int v = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw std::invalid_argument("request: bad number '" + s + "' in '" + token + "'");
        }
    };

    if (!forced_vector && target.find(',') == std::string::npos) {
        const int idx = parse_int(target);
        if (idx < 1 || idx > g.n())
            throw std::invalid_argument("request: column index out of range in '" + token + "'");
        return RequestItem{g.column(idx - 1), mult};
    }

    Vec v;
    std::istringstream ts(target);
    std::string part;
    while (std::getline(ts, part, ',')) {
        const int c = parse_int(part);
        if (c < 0 || c >= g.field().q())
            throw std::invalid_argument("request: coordinate out of range in '" + token + "'");
        v.push_back(static_cast<uint8_t>(c));
    }
    if (static_cast<int>(v.size()) != g.k())
        throw std::invalid_argument("request: vector has wrong length in '" + token + "'");
    return RequestItem{std::move(v), mult};
}

inline Request parse_request(const std::string& spec, const GeneratorMatrix& g) {
    Request req;
    std::istringstream in(spec);
    std::string token;
    while (in >> token) req.push_back(parse_request_token(token, g));
    if (req.empty()) throw std::invalid_argument("request: empty spec");
    return req;
}

}  // namespace asbpir
