#include "loopsoup/soup_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace loopsoup {

namespace {

constexpr char kBinaryMagic[4] = {'L', 'S', 'U', 'P'};
constexpr std::uint32_t kBinaryVersion = 1;

// Doubles are printed as hex floats: exact round trip, locale-proof.
void put_double(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%a", v);
    os << buf;
}

double get_double(std::istream& is) {
    std::string tok;
    if (!(is >> tok)) throw std::runtime_error("soup text: unexpected end of stream");
    return std::strtod(tok.c_str(), nullptr);
}

void write_u64_le(std::ostream& os, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(buf, 8);
}

std::uint64_t read_u64_le(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    if (!is) throw std::runtime_error("soup binary: truncated stream");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

void write_f64_le(std::ostream& os, double v) { write_u64_le(os, std::bit_cast<std::uint64_t>(v)); }

double read_f64_le(std::istream& is) { return std::bit_cast<double>(read_u64_le(is)); }

void write_config_text(std::ostream& os, const SoupConfig& c) {
    os << "loopsoup-text 1\n";
    os << "domain " << c.domain.name() << ' ';
    put_double(os, c.domain.width);
    os << ' ';
    put_double(os, c.domain.height);
    os << "\nintensity_c ";
    put_double(os, c.intensity_c);
    os << "\nt_min ";
    put_double(os, c.t_min);
    os << "\nt_max ";
    put_double(os, c.t_max);
    os << "\nstep_scale ";
    put_double(os, c.step_scale);
    os << "\nseed " << c.seed << '\n';
}

SoupConfig read_config_text(std::istream& is) {
    std::string word;
    int version = 0;
    if (!(is >> word >> version) || word != "loopsoup-text" || version != 1)
        throw std::runtime_error("soup text: bad header");
    SoupConfig c;
    std::string domain_name;
    double w, h;
    is >> word;
    if (word != "domain") throw std::runtime_error("soup text: expected domain");
    is >> domain_name;
    w = get_double(is);
    h = get_double(is);
    c.domain = domain_from_name(domain_name, w, h);
    auto field = [&](const char* name) {
        is >> word;
        if (word != name) throw std::runtime_error(std::string("soup text: expected ") + name);
        return get_double(is);
    };
    c.intensity_c = field("intensity_c");
    c.t_min = field("t_min");
    c.t_max = field("t_max");
    c.step_scale = field("step_scale");
    is >> word;
    if (word != "seed") throw std::runtime_error("soup text: expected seed");
    is >> c.seed;
    return c;
}

}  // namespace

void write_soup_text(std::ostream& os, const LoopSoup& soup) {
    write_config_text(os, soup.config);
    os << "loops " << soup.loops.size() << '\n';
    for (const auto& loop : soup.loops) {
        os << "loop ";
        put_double(os, loop.root.x);
        os << ' ';
        put_double(os, loop.root.y);
        os << ' ';
        put_double(os, loop.duration);
        os << ' ' << loop.points.size() << '\n';
        for (const auto& p : loop.points) {
            put_double(os, p.x);
            os << ' ';
            put_double(os, p.y);
            os << '\n';
        }
    }
}

LoopSoup read_soup_text(std::istream& is) {
    LoopSoup soup;
    soup.config = read_config_text(is);
    std::string word;
    std::size_t n = 0;
    is >> word >> n;
    if (word != "loops") throw std::runtime_error("soup text: expected loop count");
    soup.loops.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        is >> word;
        if (word != "loop") throw std::runtime_error("soup text: expected loop record");
        Loop loop;
        loop.root.x = get_double(is);
        loop.root.y = get_double(is);
        loop.duration = get_double(is);
        std::size_t pts = 0;
        is >> pts;
        loop.points.resize(pts);
        for (auto& p : loop.points) {
            p.x = get_double(is);
            p.y = get_double(is);
        }
        loop.bbox = bbox_of(loop.points);
        soup.loops.push_back(std::move(loop));
    }
    return soup;
}

void write_soup_binary(std::ostream& os, const LoopSoup& soup) {
    os.write(kBinaryMagic, 4);
    write_u64_le(os, kBinaryVersion);
    write_u64_le(os, static_cast<std::uint64_t>(soup.config.domain.kind));
    write_f64_le(os, soup.config.domain.width);
    write_f64_le(os, soup.config.domain.height);
    write_f64_le(os, soup.config.intensity_c);
    write_f64_le(os, soup.config.t_min);
    write_f64_le(os, soup.config.t_max);
    write_f64_le(os, soup.config.step_scale);
    write_u64_le(os, soup.config.seed);
    write_u64_le(os, soup.loops.size());
    for (const auto& loop : soup.loops) {
        write_f64_le(os, loop.root.x);
        write_f64_le(os, loop.root.y);
        write_f64_le(os, loop.duration);
        write_u64_le(os, loop.points.size());
        for (const auto& p : loop.points) {
            write_f64_le(os, p.x);
            write_f64_le(os, p.y);
        }
    }
}

LoopSoup read_soup_binary(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kBinaryMagic, 4) != 0)
        throw std::runtime_error("soup binary: bad magic");
    if (read_u64_le(is) != kBinaryVersion) throw std::runtime_error("soup binary: bad version");

    LoopSoup soup;
    const auto kind = static_cast<Domain::Kind>(read_u64_le(is));
    const double w = read_f64_le(is);
    const double h = read_f64_le(is);
    soup.config.domain = Domain{kind, w, h};
    soup.config.intensity_c = read_f64_le(is);
    soup.config.t_min = read_f64_le(is);
    soup.config.t_max = read_f64_le(is);
    soup.config.step_scale = read_f64_le(is);
    soup.config.seed = read_u64_le(is);
    const std::uint64_t n = read_u64_le(is);
    soup.loops.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        Loop loop;
        loop.root.x = read_f64_le(is);
        loop.root.y = read_f64_le(is);
        loop.duration = read_f64_le(is);
        const std::uint64_t pts = read_u64_le(is);
        loop.points.resize(pts);
        for (auto& p : loop.points) {
            p.x = read_f64_le(is);
            p.y = read_f64_le(is);
        }
        loop.bbox = bbox_of(loop.points);
        soup.loops.push_back(std::move(loop));
    }
    return soup;
}

void save_soup(const std::string& path, const LoopSoup& soup, bool binary) {
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("save_soup: cannot open " + path);
    if (binary)
        write_soup_binary(os, soup);
    else
        write_soup_text(os, soup);
}

LoopSoup load_soup(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw std::runtime_error("load_soup: cannot open " + path);
    char magic[4] = {0, 0, 0, 0};
    probe.read(magic, 4);
    probe.close();
    std::ifstream is(path, std::ios::binary);
    if (std::memcmp(magic, kBinaryMagic, 4) == 0) return read_soup_binary(is);
    return read_soup_text(is);
}

}  // namespace loopsoup
