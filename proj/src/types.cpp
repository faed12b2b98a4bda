#include "gaurast/types.hpp"

namespace gaurast {

Mat3f quat_to_mat(float w, float x, float y, float z) {
    Mat3f r;
    r(0, 0) = 1.f - 2.f * (y * y + z * z);
    r(0, 1) = 2.f * (x * y - w * z);
    r(0, 2) = 2.f * (x * z + w * y);
    r(1, 0) = 2.f * (x * y + w * z);
    r(1, 1) = 1.f - 2.f * (x * x + z * z);
    r(1, 2) = 2.f * (y * z - w * x);
    r(2, 0) = 2.f * (x * z - w * y);
    r(2, 1) = 2.f * (y * z + w * x);
    r(2, 2) = 1.f - 2.f * (x * x + y * y);
    return r;
}

}  // namespace gaurast
