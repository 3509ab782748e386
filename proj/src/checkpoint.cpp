#include "priorpaint/checkpoint.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <fstream>

namespace priorpaint::ckpt {

using nlohmann::json;

namespace {

const char kMagic[8] = {'P', 'P', 'C', 'K', 'P', 'T', '0', '1'};

void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

void append_params(std::vector<unsigned char>& out, const nn::ParamList& p) {
    for (const auto& [name, t] : p.items) {
        put_u64(out, name.size());
        out.insert(out.end(), name.begin(), name.end());
        put_u64(out, static_cast<std::uint64_t>(t.shape.n));
        put_u64(out, static_cast<std::uint64_t>(t.shape.c));
        put_u64(out, static_cast<std::uint64_t>(t.shape.h));
        put_u64(out, static_cast<std::uint64_t>(t.shape.w));
        const auto* bytes = reinterpret_cast<const unsigned char*>(t.data.data());
        out.insert(out.end(), bytes, bytes + t.data.size() * sizeof(double));
    }
}

size_t read_params(const std::vector<unsigned char>& buf, size_t pos, nn::ParamList& p) {
    for (auto& [name, t] : p.items) {
        if (pos + 8 > buf.size()) throw IoError("checkpoint: truncated parameter section");
        const std::uint64_t name_len = get_u64(&buf[pos]);
        pos += 8;
        const std::string stored(reinterpret_cast<const char*>(&buf[pos]), name_len);
        pos += name_len;
        if (stored != name)
            throw IoError("checkpoint: parameter order mismatch (" + stored + " vs " + name + ")");
        Shape s;
        s.n = static_cast<int>(get_u64(&buf[pos]));
        s.c = static_cast<int>(get_u64(&buf[pos + 8]));
        s.h = static_cast<int>(get_u64(&buf[pos + 16]));
        s.w = static_cast<int>(get_u64(&buf[pos + 24]));
        pos += 32;
        if (!(s == t.shape)) throw IoError("checkpoint: parameter shape mismatch for " + name);
        std::memcpy(t.data.data(), &buf[pos], t.data.size() * sizeof(double));
        pos += t.data.size() * sizeof(double);
    }
    return pos;
}

struct Payload {
    json manifest;
    std::vector<unsigned char> param_bytes;
};

void write_checkpoint(const std::filesystem::path& path, const json& manifest,
                      const std::vector<unsigned char>& param_bytes, std::string& hash_out) {
    const std::string mtext = manifest.dump();
    std::vector<unsigned char> payload;
    put_u64(payload, mtext.size());
    payload.insert(payload.end(), mtext.begin(), mtext.end());
    put_u64(payload, param_bytes.size());
    payload.insert(payload.end(), param_bytes.begin(), param_bytes.end());

    hash_out = sha256_hex(payload);

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("checkpoint: cannot open " + path.string());
    f.write(kMagic, sizeof(kMagic));
    f.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    const std::uint64_t hash_len = hash_out.size();
    unsigned char len_buf[8];
    for (int i = 0; i < 8; ++i) len_buf[i] = static_cast<unsigned char>((hash_len >> (8 * i)) & 0xff);
    f.write(reinterpret_cast<const char*>(len_buf), 8);
    f.write(hash_out.data(), static_cast<std::streamsize>(hash_out.size()));
    if (!f) throw IoError("checkpoint: short write to " + path.string());
}

struct RawCheckpoint {
    json manifest;
    std::vector<unsigned char> buf;  // whole file
    size_t params_pos = 0;
    std::string hash;
};

RawCheckpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("checkpoint: cannot open " + path.string());
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (buf.size() < sizeof(kMagic) + 16 || std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
        throw IoError("checkpoint: bad magic in " + path.string());

    size_t pos = sizeof(kMagic);
    const std::uint64_t mlen = get_u64(&buf[pos]);
    pos += 8;
    if (pos + mlen + 8 > buf.size()) throw IoError("checkpoint: truncated manifest");
    const size_t manifest_pos = pos;
    pos += mlen;
    const std::uint64_t plen = get_u64(&buf[pos]);
    pos += 8;
    if (pos + plen + 8 > buf.size()) throw IoError("checkpoint: truncated parameters");
    RawCheckpoint out;
    out.params_pos = pos;
    pos += plen;

    // Verify the stored digest before trusting any payload bytes.
    const size_t payload_begin = sizeof(kMagic);
    const std::string computed =
        sha256_hex(std::span<const unsigned char>(&buf[payload_begin], pos - payload_begin));
    const std::uint64_t hash_len = get_u64(&buf[pos]);
    pos += 8;
    if (pos + hash_len > buf.size()) throw IoError("checkpoint: truncated digest");
    const std::string stored(reinterpret_cast<const char*>(&buf[pos]), hash_len);
    if (stored != computed) throw IoError("checkpoint: digest mismatch in " + path.string());
    out.hash = stored;
    out.manifest = json::parse(std::string(reinterpret_cast<const char*>(&buf[manifest_pos]), mlen));
    out.buf = std::move(buf);
    return out;
}

int manifest_version(const json& m) { return m.at("format_version").get<int>(); }

}  // namespace

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::gan: return "gan";
        case Kind::cgan: return "cgan";
        case Kind::predictor: return "predictor";
        case Kind::sequence: return "sequence";
    }
    throw ArgumentError("kind_name: bad value");
}

Kind kind_from_name(const std::string& name) {
    if (name == "gan") return Kind::gan;
    if (name == "cgan") return Kind::cgan;
    if (name == "predictor") return Kind::predictor;
    if (name == "sequence") return Kind::sequence;
    throw ArgumentError("unknown checkpoint kind: " + name);
}

std::string sha256_hex(std::span<const unsigned char> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw IoError("sha256: digest failure");
    }
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string param_hash(std::span<const nn::ParamList* const> lists) {
    std::vector<unsigned char> bytes;
    for (const nn::ParamList* p : lists) append_params(bytes, *p);
    return sha256_hex(bytes);
}

CheckpointRef save_gan(const std::filesystem::path& path, const models::Generator& g,
                       const models::Discriminator& d, const std::string& config_hash) {
    json m;
    m["format_version"] = kFormatVersion;
    m["kind"] = g.cfg.conditional ? "cgan" : "gan";
    m["d"] = g.cfg.d;
    m["img"] = g.cfg.img;
    m["conditional"] = g.cfg.conditional;
    m["g_chans"] = g.cfg.chans;
    m["d_chans"] = d.cfg.chans;
    m["hidden_act"] = nn::act_name(g.cfg.hidden_act);
    m["trunk_act"] = nn::act_name(d.cfg.act);
    m["sigmoid_out"] = g.cfg.sigmoid_out;
    m["seed_res"] = g.cfg.seed_res;
    m["config_hash"] = config_hash;
    const nn::ParamList* lists[2] = {&g.params, &d.params};
    m["param_hash"] = param_hash(lists);

    std::vector<unsigned char> pbytes;
    append_params(pbytes, g.params);
    append_params(pbytes, d.params);
    CheckpointRef ref;
    ref.path = path;
    ref.kind = g.cfg.conditional ? Kind::cgan : Kind::gan;
    write_checkpoint(path, m, pbytes, ref.hash);
    return ref;
}

GanCheckpoint load_gan(const std::filesystem::path& path) {
    RawCheckpoint raw = read_checkpoint(path);
    const json& m = raw.manifest;
    if (manifest_version(m) != kFormatVersion) throw IoError("checkpoint: unsupported format version");
    const Kind kind = kind_from_name(m.at("kind").get<std::string>());
    if (kind != Kind::gan && kind != Kind::cgan)
        throw DependencyError("expected a gan/cgan checkpoint, found " + kind_name(kind));

    models::GeneratorConfig gc;
    gc.d = m.at("d").get<int>();
    gc.img = m.at("img").get<int>();
    gc.conditional = m.at("conditional").get<bool>();
    gc.chans = m.at("g_chans").get<std::vector<int>>();
    gc.hidden_act = nn::act_from_name(m.at("hidden_act").get<std::string>());
    gc.sigmoid_out = m.at("sigmoid_out").get<bool>();
    gc.seed_res = m.at("seed_res").get<int>();

    models::DiscriminatorConfig dc;
    dc.img = gc.img;
    dc.conditional = gc.conditional;
    dc.chans = m.at("d_chans").get<std::vector<int>>();
    dc.act = nn::act_from_name(m.at("trunk_act").get<std::string>());

    GanCheckpoint out{models::Generator::init(gc, 0), models::Discriminator::init(dc, 0), m};
    size_t pos = read_params(raw.buf, raw.params_pos, out.g.params);
    read_params(raw.buf, pos, out.d.params);

    const nn::ParamList* lists[2] = {&out.g.params, &out.d.params};
    if (param_hash(lists) != m.at("param_hash").get<std::string>())
        throw IoError("checkpoint: parameter hash mismatch in " + path.string());
    return out;
}

CheckpointRef save_predictor(const std::filesystem::path& path, const models::Predictor& p,
                             const std::string& gan_hash, const std::string& config_hash) {
    json m;
    m["format_version"] = kFormatVersion;
    m["kind"] = "predictor";
    m["d"] = p.cfg.d;
    m["img"] = p.cfg.img;
    m["conditional"] = p.cfg.conditional;
    m["chans"] = p.cfg.chans;
    m["trunk_act"] = nn::act_name(p.cfg.act);
    m["gan_hash"] = gan_hash;
    m["config_hash"] = config_hash;
    const nn::ParamList* lists[1] = {&p.params};
    m["param_hash"] = param_hash(lists);

    std::vector<unsigned char> pbytes;
    append_params(pbytes, p.params);
    CheckpointRef ref;
    ref.path = path;
    ref.kind = Kind::predictor;
    write_checkpoint(path, m, pbytes, ref.hash);
    return ref;
}

PredictorCheckpoint load_predictor(const std::filesystem::path& path) {
    RawCheckpoint raw = read_checkpoint(path);
    const json& m = raw.manifest;
    if (manifest_version(m) != kFormatVersion) throw IoError("checkpoint: unsupported format version");
    if (kind_from_name(m.at("kind").get<std::string>()) != Kind::predictor)
        throw DependencyError("expected a predictor checkpoint");

    models::PredictorConfig pc;
    pc.d = m.at("d").get<int>();
    pc.img = m.at("img").get<int>();
    pc.conditional = m.at("conditional").get<bool>();
    pc.chans = m.at("chans").get<std::vector<int>>();
    pc.act = nn::act_from_name(m.at("trunk_act").get<std::string>());

    PredictorCheckpoint out{models::Predictor::init(pc, 0), m};
    read_params(raw.buf, raw.params_pos, out.p.params);
    const nn::ParamList* lists[1] = {&out.p.params};
    if (param_hash(lists) != m.at("param_hash").get<std::string>())
        throw IoError("checkpoint: parameter hash mismatch in " + path.string());
    return out;
}

CheckpointRef save_sequence(const std::filesystem::path& path, const models::SeqModel& mod, double lambda4,
                            const std::string& gan_hash, const std::string& config_hash) {
    json m;
    m["format_version"] = kFormatVersion;
    m["kind"] = "sequence";
    m["d"] = mod.cfg.d;
    m["img"] = mod.cfg.img;
    m["conditional"] = mod.cfg.conditional;
    m["chans"] = mod.cfg.chans;
    m["trunk_act"] = nn::act_name(mod.cfg.act);
    m["hidden"] = mod.cfg.hidden;
    m["window"] = mod.cfg.window;
    m["lambda4"] = lambda4;
    m["gan_hash"] = gan_hash;
    m["config_hash"] = config_hash;
    const nn::ParamList* lists[1] = {&mod.params};
    m["param_hash"] = param_hash(lists);

    std::vector<unsigned char> pbytes;
    append_params(pbytes, mod.params);
    CheckpointRef ref;
    ref.path = path;
    ref.kind = Kind::sequence;
    write_checkpoint(path, m, pbytes, ref.hash);
    return ref;
}

SeqCheckpoint load_sequence(const std::filesystem::path& path) {
    RawCheckpoint raw = read_checkpoint(path);
    const json& m = raw.manifest;
    if (manifest_version(m) != kFormatVersion) throw IoError("checkpoint: unsupported format version");
    if (kind_from_name(m.at("kind").get<std::string>()) != Kind::sequence)
        throw DependencyError("expected a sequence checkpoint");

    models::SeqModelConfig mc;
    mc.d = m.at("d").get<int>();
    mc.img = m.at("img").get<int>();
    mc.conditional = m.at("conditional").get<bool>();
    mc.chans = m.at("chans").get<std::vector<int>>();
    mc.act = nn::act_from_name(m.at("trunk_act").get<std::string>());
    mc.hidden = m.at("hidden").get<int>();
    mc.window = m.at("window").get<int>();

    SeqCheckpoint out{models::SeqModel::init(mc, 0), m};
    read_params(raw.buf, raw.params_pos, out.m.params);
    const nn::ParamList* lists[1] = {&out.m.params};
    if (param_hash(lists) != m.at("param_hash").get<std::string>())
        throw IoError("checkpoint: parameter hash mismatch in " + path.string());
    return out;
}

std::pair<nlohmann::json, std::string> inspect(const std::filesystem::path& path) {
    RawCheckpoint raw = read_checkpoint(path);
    return {raw.manifest, raw.hash};
}

}  // namespace priorpaint::ckpt
