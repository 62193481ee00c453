#include "facepipe/ppm.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "facepipe/error.hpp"

namespace facepipe {

namespace {

// 5x7 glyphs, one byte per row, low 5 bits used.
struct Glyph {
    char c;
    std::uint8_t rows[7];
};

constexpr Glyph kFont[] = {
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
    {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
    {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
    {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
    {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
    {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
    {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}},
    {'D', {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C}},
    {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}},
    {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
    {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}},
    {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}},
    {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}},
    {'N', {0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}},
    {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}},
    {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}},
    {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}},
    {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
};

const Glyph* find_glyph(char c) {
    for (const Glyph& g : kFont)
        if (g.c == c)
            return &g;
    return nullptr;
}

struct Color {
    std::uint8_t r, g, b;
};

constexpr Color kPalette[] = {
    {0xE4, 0x5A, 0x5A}, {0x5A, 0xB8, 0xE4}, {0x7A, 0xD1, 0x6C},
    {0xE4, 0xC4, 0x4A}, {0xC9, 0x7A, 0xE4}, {0x5A, 0xE4, 0xC0},
};

void put_pixel(Image& img, int x, int y, Color c) {
    if (x < 0 || y < 0 || x >= img.width || y >= img.height)
        return;
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * img.width + x);
    img.rgb[i] = c.r;
    img.rgb[i + 1] = c.g;
    img.rgb[i + 2] = c.b;
}

void draw_rect(Image& img, const BBox& b, Color c) {
    const int x0 = static_cast<int>(b.x);
    const int y0 = static_cast<int>(b.y);
    const int x1 = static_cast<int>(b.x + b.w);
    const int y1 = static_cast<int>(b.y + b.h);
    for (int x = x0; x <= x1; ++x) {
        put_pixel(img, x, y0, c);
        put_pixel(img, x, y1, c);
    }
    for (int y = y0; y <= y1; ++y) {
        put_pixel(img, x0, y, c);
        put_pixel(img, x1, y, c);
    }
}

void draw_text(Image& img, int x, int y, const std::string& text, Color c) {
    for (char ch : text) {
        if (const Glyph* g = find_glyph(static_cast<char>(std::toupper(ch)))) {
            for (int r = 0; r < 7; ++r)
                for (int col = 0; col < 5; ++col)
                    if (g->rows[r] & (1 << (4 - col)))
                        put_pixel(img, x + col, y + r, c);
        }
        x += 6; // 5 wide + 1 gap; unknown glyphs render as space
    }
}

const char* expression_code(Expression e) {
    switch (e) {
    case Expression::neutral: return "NEU";
    case Expression::happiness: return "HAP";
    case Expression::sadness: return "SAD";
    case Expression::surprise: return "SUR";
    case Expression::fear: return "FEA";
    case Expression::disgust: return "DIS";
    case Expression::anger: return "ANG";
    }
    return "";
}

} // namespace

Image render_annotated(const AnnotatedFrame& frame, int width, int height) {
    if (width <= 0 || height <= 0)
        throw InvalidInput("render_annotated: bad image size");
    Image img;
    img.width = width;
    img.height = height;
    img.rgb.assign(static_cast<std::size_t>(width) * height * 3, 0x20);

    for (const AnnotatedTrack& t : frame.tracks) {
        const Color c = kPalette[static_cast<std::size_t>(t.track_id) % std::size(kPalette)];
        draw_rect(img, t.box, c);
        std::string label = "ID" + std::to_string(t.track_id);
        if (t.age_years)
            label += " " + std::to_string(*t.age_years) + "Y";
        if (t.gender)
            label += *t.gender == Gender::female ? " F" : " M";
        if (t.expression)
            label += std::string(" ") + expression_code(*t.expression);
        const int tx = static_cast<int>(t.box.x);
        int ty = static_cast<int>(t.box.y) - 9;
        if (ty < 0)
            ty = static_cast<int>(t.box.y + t.box.h) + 2;
        draw_text(img, tx, ty, label, c);
    }
    return img;
}

void write_ppm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write image: " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()),
              static_cast<std::streamsize>(img.rgb.size()));
    if (!out)
        throw IoError("failed writing image: " + path);
}

void dump_frames(const std::vector<AnnotatedFrame>& frames, int width, int height,
                 const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory: " + dir);
    char name[32];
    for (std::size_t i = 0; i < frames.size(); ++i) {
        std::snprintf(name, sizeof(name), "tick_%06zu.ppm", i);
        write_ppm(render_annotated(frames[i], width, height),
                  (std::filesystem::path(dir) / name).string());
    }
}

} // namespace facepipe
