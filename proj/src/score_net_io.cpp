#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "scorelab/errors.hpp"
#include "scorelab/score_net.hpp"

namespace scorelab {

namespace {

constexpr char kMagic[4] = {'S', 'C', 'N', 'T'};
constexpr std::uint32_t kActivationRelu = 1;
constexpr std::uint32_t kMaxLayers = 1024;
constexpr std::uint32_t kMaxWidth = 1u << 20;

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::string& out, T value) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    out.append(reinterpret_cast<const char*>(buf), sizeof(T));
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    template <class T>
    T get(const char* what) {
        if (bytes_.size() - pos_ < sizeof(T))
            throw ParseError(std::string("model file truncated while reading ") + what, pos_);
        unsigned char buf[sizeof(T)];
        std::memcpy(buf, bytes_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
        T value;
        std::memcpy(&value, buf, sizeof(T));
        pos_ += sizeof(T);
        return value;
    }

    std::size_t pos() const { return pos_; }
    bool done() const { return pos_ == bytes_.size(); }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string serialize(const ScoreNet& net) {
    std::string out(kMagic, 4);
    put<std::uint32_t>(out, kModelFormatVersion);
    put<std::uint32_t>(out, kActivationRelu);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(net.layer_sizes().size()));
    for (std::size_t s : net.layer_sizes()) put<std::uint32_t>(out, static_cast<std::uint32_t>(s));
    for (const auto& l : net.layers()) {
        for (double w : l.weights.data()) put<double>(out, w);
        for (double b : l.bias) put<double>(out, b);
    }
    return out;
}

ScoreNet deserialize(std::string_view bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw ParseError("not a score net model file", 0);
    Reader r(bytes.substr(4));
    const auto at = [&] { return r.pos() + 4; };
    const auto version = r.get<std::uint32_t>("version");
    if (version != kModelFormatVersion) throw UnsupportedVersion(version, kModelFormatVersion);
    const std::size_t act_off = at();
    if (r.get<std::uint32_t>("activation tag") != kActivationRelu) throw ParseError("unknown activation tag", act_off);
    const std::size_t count_off = at();
    const auto count = r.get<std::uint32_t>("layer count");
    if (count < 2 || count > kMaxLayers) throw ParseError("implausible layer count", count_off);
    std::vector<std::size_t> sizes(count);
    for (auto& s : sizes) {
        const std::size_t off = at();
        s = r.get<std::uint32_t>("layer size");
        if (s == 0 || s > kMaxWidth) throw ParseError("implausible layer size", off);
    }
    ScoreNet net(sizes);
    for (auto& l : net.layers()) {
        for (double& w : l.weights.data()) {
            const std::size_t off = at();
            w = r.get<double>("weights");
            if (!std::isfinite(w)) throw ParseError("non-finite weight", off);
        }
        for (double& b : l.bias) {
            const std::size_t off = at();
            b = r.get<double>("biases");
            if (!std::isfinite(b)) throw ParseError("non-finite bias", off);
        }
    }
    if (!r.done()) throw ParseError("trailing bytes after model record", at());
    return net;
}

void save_model(const ScoreNet& net, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    const std::string bytes = serialize(net);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("failed writing " + path);
}

ScoreNet load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return deserialize(ss.str());
}

}  // namespace scorelab
