#include "qinsch/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "qinsch/errors.hpp"

namespace qinsch {

namespace {

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double byteswap_double(double x) {
    std::uint64_t u;
    std::memcpy(&u, &x, 8);
    u = ((u & 0x00000000000000FFULL) << 56) | ((u & 0x000000000000FF00ULL) << 40) |
        ((u & 0x0000000000FF0000ULL) << 24) | ((u & 0x00000000FF000000ULL) << 8) |
        ((u & 0x000000FF00000000ULL) >> 8) | ((u & 0x0000FF0000000000ULL) >> 24) |
        ((u & 0x00FF000000000000ULL) >> 40) | ((u & 0xFF00000000000000ULL) >> 56);
    double out;
    std::memcpy(&out, &u, 8);
    return out;
}

void append_le(std::string& out, const std::vector<double>& v) {
    const std::size_t at = out.size();
    out.resize(at + v.size() * 8);
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(out.data() + at, v.data(), v.size() * 8);
    } else {
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double x = byteswap_double(v[i]);
            std::memcpy(out.data() + at + 8 * i, &x, 8);
        }
    }
}

void read_le(const char* src, std::vector<double>& v) {
    std::memcpy(v.data(), src, v.size() * 8);
    if constexpr (std::endian::native == std::endian::big) {
        for (double& x : v) x = byteswap_double(x);
    }
}

// header tokens are "key=value"; values never contain spaces
std::string token_value(const std::string& tok, const std::string& key, const std::string& header) {
    if (tok.rfind(key + "=", 0) != 0) {
        throw CheckpointError("checkpoint header: expected '" + key + "=...', got '" + tok +
                              "' in: " + header);
    }
    return tok.substr(key.size() + 1);
}

int parse_header_int(const std::string& text, const std::string& key) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw CheckpointError("checkpoint header: bad integer for " + key + ": '" + text + "'");
    }
}

double parse_header_double(const std::string& text, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw CheckpointError("checkpoint header: bad number for " + key + ": '" + text + "'");
    }
}

} // namespace

std::string write_checkpoint(const MixtureState& state, double alpha) {
    const TorusGrid& g = state.phi.grid;
    const int d = g.dim();

    std::string header = "QINSCH1 dim=" + std::to_string(d) + " n=";
    for (int a = 0; a < d; ++a) {
        if (a) header += ",";
        header += std::to_string(g.n(a));
    }
    header += " length=" + fmt_double(g.length(0));
    header += " t=" + fmt_double(state.t);
    header += " alpha=" + fmt_double(alpha);
    header += " fields=phi";
    for (int a = 0; a < d; ++a) header += ",u" + std::to_string(a + 1);
    header += ",p0,mu_p0";
    header += " mu_bar=" + fmt_double(state.mu_bar);
    header += "\n";

    std::string out = header;
    append_le(out, state.phi.v);
    for (int a = 0; a < d; ++a) append_le(out, state.u[a].v);
    append_le(out, state.p0.v);
    append_le(out, state.mu_p0.v);
    return out;
}

Checkpoint read_checkpoint(const std::string& bytes) {
    const auto nl = bytes.find('\n');
    if (nl == std::string::npos) throw CheckpointError("checkpoint: missing header line");
    const std::string header = bytes.substr(0, nl);

    std::istringstream hs(header);
    std::string magic;
    hs >> magic;
    if (magic != "QINSCH1") {
        throw CheckpointError("checkpoint: bad magic '" + magic + "' (want QINSCH1)");
    }
    std::string tok;

    hs >> tok;
    const int d = parse_header_int(token_value(tok, "dim", header), "dim");
    if (d != 2 && d != 3) throw CheckpointError("checkpoint: dim must be 2 or 3");

    hs >> tok;
    std::array<int, 3> n{1, 1, 1};
    {
        std::istringstream ns(token_value(tok, "n", header));
        std::string piece;
        int a = 0;
        while (std::getline(ns, piece, ',')) {
            if (a >= d) throw CheckpointError("checkpoint: too many n entries");
            n[a++] = parse_header_int(piece, "n");
        }
        if (a != d) throw CheckpointError("checkpoint: expected " + std::to_string(d) + " n entries");
    }

    hs >> tok;
    const double length = parse_header_double(token_value(tok, "length", header), "length");
    hs >> tok;
    const double t = parse_header_double(token_value(tok, "t", header), "t");
    hs >> tok;
    const double alpha = parse_header_double(token_value(tok, "alpha", header), "alpha");

    hs >> tok;
    std::string fields = token_value(tok, "fields", header);
    std::string expected = "phi";
    for (int a = 0; a < d; ++a) expected += ",u" + std::to_string(a + 1);
    expected += ",p0,mu_p0";
    if (fields != expected) {
        throw CheckpointError("checkpoint: field list '" + fields + "' does not match payload '" +
                              expected + "'");
    }

    hs >> tok;
    const double mu_bar = parse_header_double(token_value(tok, "mu_bar", header), "mu_bar");

    const TorusGrid grid = [&] {
        try {
            return TorusGrid(d, n, {length, length, length});
        } catch (const std::invalid_argument& e) {
            throw CheckpointError(std::string("checkpoint header: bad grid: ") + e.what());
        }
    }();
    const std::size_t pts = grid.point_count();
    const std::size_t need = static_cast<std::size_t>(d + 3) * pts * 8;
    const std::size_t have = bytes.size() - nl - 1;
    if (have < need) {
        throw CheckpointError("checkpoint: TruncatedPayload (need " + std::to_string(need) +
                              " bytes, have " + std::to_string(have) + ")");
    }
    if (have > need) {
        throw CheckpointError("checkpoint: payload longer than header declares (" +
                              std::to_string(have) + " vs " + std::to_string(need) + ")");
    }

    Checkpoint cp;
    cp.alpha = alpha;
    cp.state = MixtureState(grid);
    cp.state.t = t;
    cp.state.mu_bar = mu_bar;

    const char* src = bytes.data() + nl + 1;
    auto next_field = [&src, pts](std::vector<double>& v) {
        v.resize(pts);
        read_le(src, v);
        src += pts * 8;
    };
    next_field(cp.state.phi.v);
    for (int a = 0; a < d; ++a) next_field(cp.state.u[a].v);
    next_field(cp.state.p0.v);
    next_field(cp.state.mu_p0.v);
    return cp;
}

void save_checkpoint(const std::string& path, const MixtureState& state, double alpha) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CheckpointError("checkpoint: cannot open '" + path + "' for writing");
    const std::string bytes = write_checkpoint(state, alpha);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CheckpointError("checkpoint: write failed for '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("checkpoint: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_checkpoint(ss.str());
}

} // namespace qinsch
