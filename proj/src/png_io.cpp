#include "priorpaint/png_io.hpp"

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>

#include "priorpaint/errors.hpp"

namespace priorpaint::png {

namespace {

const unsigned char kSignature[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
    out.push_back(static_cast<unsigned char>(v & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | p[3];
}

void append_chunk(std::vector<unsigned char>& out, const char type[4], const std::vector<unsigned char>& data) {
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    std::vector<unsigned char> body(type, type + 4);
    body.insert(body.end(), data.begin(), data.end());
    out.insert(out.end(), body.begin(), body.end());
    put_u32(out, static_cast<std::uint32_t>(crc32(0, body.data(), static_cast<uInt>(body.size()))));
}

int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

}  // namespace

void write_gray8(const std::filesystem::path& path, int h, int w, const std::vector<unsigned char>& pixels) {
    if (h <= 0 || w <= 0 || pixels.size() != static_cast<size_t>(h) * w)
        throw ArgumentError("write_gray8: bad dimensions");

    // Raw scanlines, filter type 0 per row.
    std::vector<unsigned char> raw;
    raw.reserve(static_cast<size_t>(h) * (w + 1));
    for (int r = 0; r < h; ++r) {
        raw.push_back(0);
        raw.insert(raw.end(), pixels.begin() + static_cast<size_t>(r) * w,
                   pixels.begin() + static_cast<size_t>(r + 1) * w);
    }
    uLongf comp_size = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> comp(comp_size);
    if (compress2(comp.data(), &comp_size, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw IoError("write_gray8: deflate failed");
    comp.resize(comp_size);

    std::vector<unsigned char> out(kSignature, kSignature + 8);
    std::vector<unsigned char> ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(w));
    put_u32(ihdr, static_cast<std::uint32_t>(h));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(0);  // grayscale
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter
    ihdr.push_back(0);  // no interlace
    append_chunk(out, "IHDR", ihdr);
    append_chunk(out, "IDAT", comp);
    append_chunk(out, "IEND", {});

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("write_gray8: cannot open " + path.string());
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError("write_gray8: short write to " + path.string());
}

Gray8 read_gray8(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("read_gray8: cannot open " + path.string());
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (buf.size() < 8 || std::memcmp(buf.data(), kSignature, 8) != 0)
        throw IoError("read_gray8: not a PNG: " + path.string());

    Gray8 img;
    std::vector<unsigned char> idat;
    size_t pos = 8;
    bool seen_ihdr = false;
    while (pos + 8 <= buf.size()) {
        const std::uint32_t len = get_u32(&buf[pos]);
        if (pos + 12 + len > buf.size()) throw IoError("read_gray8: truncated chunk");
        const char* type = reinterpret_cast<const char*>(&buf[pos + 4]);
        const unsigned char* data = &buf[pos + 8];
        if (std::memcmp(type, "IHDR", 4) == 0) {
            img.w = static_cast<int>(get_u32(data));
            img.h = static_cast<int>(get_u32(data + 4));
            if (data[8] != 8 || data[9] != 0)
                throw IoError("read_gray8: only 8-bit grayscale supported: " + path.string());
            if (data[12] != 0) throw IoError("read_gray8: interlaced PNG not supported");
            seen_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            break;
        }
        pos += 12 + len;
    }
    if (!seen_ihdr || img.h <= 0 || img.w <= 0) throw IoError("read_gray8: missing IHDR");

    const size_t raw_size = static_cast<size_t>(img.h) * (img.w + 1);
    std::vector<unsigned char> raw(raw_size);
    uLongf dest = static_cast<uLongf>(raw_size);
    if (uncompress(raw.data(), &dest, idat.data(), static_cast<uLong>(idat.size())) != Z_OK || dest != raw_size)
        throw IoError("read_gray8: inflate failed for " + path.string());

    img.pixels.assign(static_cast<size_t>(img.h) * img.w, 0);
    const int w = img.w;
    for (int r = 0; r < img.h; ++r) {
        const unsigned char filter = raw[static_cast<size_t>(r) * (w + 1)];
        const unsigned char* src = &raw[static_cast<size_t>(r) * (w + 1) + 1];
        unsigned char* dst = &img.pixels[static_cast<size_t>(r) * w];
        const unsigned char* up = r > 0 ? &img.pixels[static_cast<size_t>(r - 1) * w] : nullptr;
        for (int c = 0; c < w; ++c) {
            const int a = c > 0 ? dst[c - 1] : 0;
            const int b = up ? up[c] : 0;
            const int cc = (c > 0 && up) ? up[c - 1] : 0;
            int v = src[c];
            switch (filter) {
                case 0: break;
                case 1: v += a; break;
                case 2: v += b; break;
                case 3: v += (a + b) / 2; break;
                case 4: v += paeth(a, b, cc); break;
                default: throw IoError("read_gray8: unknown filter type");
            }
            dst[c] = static_cast<unsigned char>(v & 0xff);
        }
    }
    return img;
}

void write_image(const std::filesystem::path& path, const Image& im) {
    write_gray8(path, im.h, im.w, quantize8(im));
}

Image read_image(const std::filesystem::path& path) {
    Gray8 g = read_gray8(path);
    return dequantize8(g.pixels, g.h, g.w);
}

}  // namespace priorpaint::png
