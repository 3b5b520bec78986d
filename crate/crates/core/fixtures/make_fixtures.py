# Copyright 2026 The canonhand Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerate the test hands in this directory.

Each hand is described in its canonical palm frame as a set of chains of
(joint, offset, axis) entries. Link frames are then twisted by a per-joint
rotation so the emitted URDF uses the vendor-style axis conventions.
"""

import json
import math
import os
import re
import struct

HERE = os.path.dirname(os.path.abspath(__file__))
PI = math.pi


# 3x3 helpers, row-major tuples


def mat_mul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)) for i in range(3)
    )


def mat_vec(a, v):
    return tuple(sum(a[i][k] * v[k] for k in range(3)) for i in range(3))


def transpose(a):
    return tuple(tuple(a[j][i] for j in range(3)) for i in range(3))


def rot_x(t):
    c, s = math.cos(t), math.sin(t)
    return ((1, 0, 0), (0, c, -s), (0, s, c))


def rot_y(t):
    c, s = math.cos(t), math.sin(t)
    return ((c, 0, s), (0, 1, 0), (-s, 0, c))


def rot_z(t):
    c, s = math.cos(t), math.sin(t)
    return ((c, -s, 0), (s, c, 0), (0, 0, 1))


IDENT = rot_z(0.0)


def rpy_to_mat(r, p, y):
    return mat_mul(rot_z(y), mat_mul(rot_y(p), rot_x(r)))


def mat_to_rpy(m):
    pitch = math.atan2(-m[2][0], math.hypot(m[0][0], m[1][0]))
    roll = math.atan2(m[2][1], m[2][2])
    yaw = math.atan2(m[1][0], m[0][0])
    return (roll, pitch, yaw)


def normalize(v):
    n = math.sqrt(sum(x * x for x in v))
    return tuple(x / n for x in v)


def cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


class Pose:
    def __init__(self, t=(0.0, 0.0, 0.0), r=IDENT):
        self.t = tuple(float(x) for x in t)
        self.r = r

    def __mul__(self, o):
        t = mat_vec(self.r, o.t)
        return Pose(tuple(a + b for a, b in zip(self.t, t)), mat_mul(self.r, o.r))

    def inv(self):
        rt = transpose(self.r)
        return Pose(tuple(-x for x in mat_vec(rt, self.t)), rt)


def fmt(v):
    return " ".join(repr(round(x, 15) + 0.0) for x in v)


def origin_tag(p):
    return '<origin xyz="%s" rpy="%s"/>' % (fmt(p.t), fmt(mat_to_rpy(p.r)))


# geometry tags


def cylinder(radius, length):
    return (
        '<cylinder radius="%r" length="%r"/>' % (radius, length),
        Pose((0, 0, length / 2)),
    )


def box(sx, sy, sz, center=(0, 0, 0)):
    return ('<box size="%r %r %r"/>' % (sx, sy, sz), Pose(center))


def sphere(radius):
    return ('<sphere radius="%r"/>' % radius, Pose())


class Hand:
    def __init__(self, name, palm_origin):
        self.name = name
        # canonical palm frame in URDF root coordinates
        self.palm_origin = palm_origin
        self.links = []
        self.joints = []
        self.frames = {}

    def root(self, name, geoms):
        """Root link; `geoms` are given in the canonical palm frame."""
        self.frames[name] = self.palm_origin.inv()
        self.links.append((name, [(g, self.palm_origin * p) for g, p in geoms]))

    def link(self, name, geoms=(), twist=IDENT):
        # geoms are given in the canonical chain frame; the link frame is
        # that frame rotated by `twist`
        self.links.append((name, [(g, Pose(r=transpose(twist)) * p) for g, p in geoms]))

    def joint(self, name, kind, parent, child, frame, axis=None, limit=None, twist=IDENT):
        """`frame` is the canonical pose of the child in the palm frame."""
        parent_frame = self.frames[parent]
        child_frame = frame * Pose(r=twist)
        self.frames[child] = child_frame
        origin = parent_frame.inv() * child_frame
        local_axis = mat_vec(transpose(twist), axis) if axis else None
        self.joints.append((name, kind, parent, child, origin, local_axis, limit))

    def xml(self):
        out = ['<?xml version="1.0"?>', '<robot name="%s">' % self.name]
        for name, geoms in self.links:
            out.append('  <link name="%s">' % name)
            for tag in ("visual", "collision"):
                for g, p in geoms:
                    out.append("    <%s>" % tag)
                    out.append("      " + origin_tag(p))
                    out.append("      <geometry>%s</geometry>" % g)
                    out.append("    </%s>" % tag)
            if geoms:
                out.append('    <inertial><origin xyz="0 0 0"/><mass value="0.05"/>'
                           '<inertia ixx="1e-05" ixy="0" ixz="0" iyy="1e-05" iyz="0" izz="1e-05"/>'
                           '</inertial>')
            out.append("  </link>")
        for name, kind, parent, child, origin, axis, limit in self.joints:
            out.append('  <joint name="%s" type="%s">' % (name, kind))
            out.append('    <parent link="%s"/>' % parent)
            out.append('    <child link="%s"/>' % child)
            out.append("    " + origin_tag(origin))
            if axis:
                out.append('    <axis xyz="%s"/>' % fmt(axis))
            if limit:
                out.append('    <limit lower="%r" upper="%r" effort="10" velocity="5"/>' % limit)
            out.append("  </joint>")
        out.append("</robot>")
        return "\n".join(out) + "\n"


X, Y, Z = (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)
NX, NY, NZ = (-1.0, 0.0, 0.0), (0.0, -1.0, 0.0), (0.0, 0.0, -1.0)


def build_chain(hand, mapping, parent, base, spec, radius, tip_name):
    """spec: list of (joint, link, offset_before_joint, canonical_axis, slot,
    sign, limit, twist, segment_length_after)."""
    frame = base
    prev = parent
    for joint, link, offset, axis, slot, sign, limit, twist, seg in spec:
        frame = frame * offset
        geoms = [cylinder(radius, seg)] if seg > 0 else [sphere(radius)]
        hand.link(link, geoms, twist)
        urdf_axis = axis if sign > 0 else tuple(-a for a in axis)
        lim = limit if sign > 0 else (-limit[1], -limit[0])
        hand.joint(joint, "revolute", prev, link, frame, urdf_axis, lim, twist)
        mapping.append([joint, slot, sign])
        prev = link
    last_len = spec[-1][8]
    hand.link(tip_name)
    hand.joint(tip_name + "_joint", "fixed", prev, tip_name, frame * Pose((0, 0, last_len)))


def stl_box(path, lo, hi, scale):
    corners = []
    for i in range(8):
        corners.append(tuple((hi if i >> k & 1 else lo)[k] / scale for k in range(3)))
    faces = [
        (0, 2, 1), (1, 2, 3), (4, 5, 6), (5, 7, 6), (0, 1, 4), (1, 5, 4),
        (2, 6, 3), (3, 6, 7), (0, 4, 2), (2, 4, 6), (1, 3, 5), (3, 7, 5),
    ]
    with open(path, "wb") as f:
        f.write(b"canonhand palm".ljust(80, b" "))
        f.write(struct.pack("<I", len(faces)))
        for a, b, c in faces:
            f.write(struct.pack("<3f", 0, 0, 0))
            for v in (corners[a], corners[b], corners[c]):
                f.write(struct.pack("<3f", *v))
            f.write(struct.pack("<H", 0))


def dump(obj, path):
    text = json.dumps(obj, indent=2)
    # flat lists on one line
    text = re.sub(r"\[\s*([^\[\]{}]*?)\s*\]", lambda m: "[" + re.sub(r"\s*\n\s*", " ", m.group(1)) + "]", text)
    with open(path, "w") as f:
        f.write(text + "\n")


def write(name, hand, annotation):
    with open(os.path.join(HERE, name + ".urdf"), "w") as f:
        f.write(hand.xml())
    dump(annotation, os.path.join(HERE, name + ".annotation.json"))


def annotation(mapping, palm_origin, tips, palm_link=None):
    a = {
        "joint_map": mapping,
        "palm_origin": {"xyz": list(palm_origin.t), "rpy": list(mat_to_rpy(palm_origin.r))},
        "handedness": "right",
        "fingertip_links": tips,
    }
    if palm_link:
        a["palm_link"] = palm_link
    return a


FLEX = (-0.26, 1.57)
ABD = (-0.35, 0.35)


def shadow():
    po = Pose((0.0, 0.0, 0.034))
    h = Hand("shadowhand_right", po)
    h.root("forearm", [box(0.06, 0.09, 0.2, (0, 0, -0.1))])
    mesh = (
        '<mesh filename="package://shadow_description/meshes/palm.stl" scale="0.001 0.001 0.001"/>',
        Pose(),
    )
    h.link("palm", [mesh])
    h.joint("forearm_palm", "fixed", "forearm", "palm", Pose())
    mdir = os.path.join(HERE, "shadow_description", "meshes")
    os.makedirs(mdir, exist_ok=True)
    stl_box(os.path.join(mdir, "palm.stl"), (-0.011, -0.0475, 0.0), (0.011, 0.0475, 0.1), 0.001)

    m = []
    r = 0.0095
    knuckles = {"ff": (0.0, 0.033, 0.095), "mf": (0.0, 0.011, 0.099), "rf": (0.0, -0.011, 0.095)}
    slots = {"ff": 5, "mf": 9, "rf": 13}
    for f in ("ff", "mf", "rf"):
        s = slots[f]
        sign4 = -1 if f == "ff" else 1
        spec = [
            ("%sJ4" % f.upper(), f + "knuckle", Pose(), X, s, sign4, ABD, IDENT, 0.0),
            ("%sJ3" % f.upper(), f + "proximal", Pose(), Y, s + 1, 1, FLEX, IDENT, 0.045),
            ("%sJ2" % f.upper(), f + "middle", Pose((0, 0, 0.045)), Y, s + 2, 1, FLEX, IDENT, 0.025),
            ("%sJ1" % f.upper(), f + "distal", Pose((0, 0, 0.025)), Y, s + 3, 1, FLEX, IDENT, 0.026),
        ]
        build_chain(h, m, "palm", Pose(knuckles[f]), spec, r, f + "tip")

    # little: metacarpal joint about an axis in the palm plane
    ye = normalize((0.0, -0.5736, 0.8192))
    xe = X
    ze = cross(xe, ye)
    re = tuple(tuple((xe, ye, ze)[j][i] for j in range(3)) for i in range(3))
    e = Pose((0.0, -0.017, 0.02), re)
    k = (0.0, -0.033, 0.086)
    rel = e.inv() * Pose(k)
    spec = [
        ("LFJ5", "lfmetacarpal", Pose(), Y, 17, 1, (0.0, 0.785), IDENT, 0.0),
        ("LFJ4", "lfknuckle", rel, X, 18, 1, ABD, IDENT, 0.0),
        ("LFJ3", "lfproximal", Pose(), Y, 19, 1, FLEX, IDENT, 0.045),
        ("LFJ2", "lfmiddle", Pose((0, 0, 0.045)), Y, 20, 1, FLEX, IDENT, 0.025),
        ("LFJ1", "lfdistal", Pose((0, 0, 0.025)), Y, 21, 1, FLEX, IDENT, 0.026),
    ]
    build_chain(h, m, "palm", e, spec, r, "lftip")

    th = Pose((0.029, 0.034, 0.029), rpy_to_mat(-1.0, 0.35, 0.0))
    spec = [
        ("THJ5", "thbase", Pose(), Y, 0, 1, (-1.047, 1.047), IDENT, 0.0),
        ("THJ4", "thproximal", Pose(), X, 1, 1, (0.0, 1.222), IDENT, 0.038),
        ("THJ3", "thhub", Pose((0, 0, 0.038)), X, 2, 1, (-0.209, 0.209), IDENT, 0.0),
        ("THJ2", "thmiddle", Pose(), Y, 3, 1, (-0.698, 0.698), IDENT, 0.032),
        ("THJ1", "thdistal", Pose((0, 0, 0.032)), Y, 4, -1, (-0.262, 1.571), IDENT, 0.0275),
    ]
    build_chain(h, m, "palm", th, spec, r, "thtip")
    tips = {"thumb": "thtip", "index": "fftip", "middle": "mftip", "ring": "rftip", "little": "lftip"}
    write("shadow", h, annotation(m, po, tips, "palm"))


def allegro():
    po = Pose((0.0, 0.0, -0.0475), rot_z(PI / 2))
    h = Hand("allegro_hand_right", po)
    h.root("base_link", [box(0.0408, 0.1130, 0.095, (-0.0093, 0.0, 0.0475))])
    m = []
    r = 0.0098
    # link frames carry the abduction axis along z
    abd_twist = rot_y(PI / 2)
    flex_twist = rot_z(PI / 2)
    fingers = [(0, 5, (0.0, 0.0435, 0.0917)), (4, 9, (0.0, 0.0, 0.0957)), (8, 18, (0.0, -0.0435, 0.0917))]
    for j0, s, base in fingers:
        sign0 = -1 if j0 == 4 else 1
        spec = [
            ("joint_%d.0" % j0, "link_%d.0" % j0, Pose(), X, s, sign0, (-0.47, 0.47), abd_twist, 0.0164),
            ("joint_%d.0" % (j0 + 1), "link_%d.0" % (j0 + 1), Pose((0, 0, 0.0164)), Y, s + 1, 1,
             (-0.196, 1.61), flex_twist, 0.054),
            ("joint_%d.0" % (j0 + 2), "link_%d.0" % (j0 + 2), Pose((0, 0, 0.054)), Y, s + 2, 1,
             (-0.174, 1.709), flex_twist, 0.0384),
            ("joint_%d.0" % (j0 + 3), "link_%d.0" % (j0 + 3), Pose((0, 0, 0.0384)), Y, s + 3, 1,
             (-0.227, 1.618), flex_twist, 0.0267),
        ]
        build_chain(h, m, "base_link", Pose(base), spec, r, "link_%d.0_tip" % (j0 + 3))
    th = Pose((0.0182, 0.0197, 0.0154), rpy_to_mat(-1.4, 0.3, 0.2))
    spec = [
        ("joint_12.0", "link_12.0", Pose(), Y, 0, 1, (0.263, 1.396), rot_x(PI / 2), 0.0),
        ("joint_13.0", "link_13.0", Pose(), Z, 1, -1, (-0.105, 1.163), IDENT, 0.0177),
        ("joint_14.0", "link_14.0", Pose((0, 0, 0.0177)), Y, 3, 1, (-0.189, 1.644), flex_twist, 0.0514),
        ("joint_15.0", "link_15.0", Pose((0, 0, 0.0514)), Y, 4, 1, (-0.162, 1.719), flex_twist, 0.0423),
    ]
    build_chain(h, m, "base_link", th, spec, r, "link_15.0_tip")
    tips = {"thumb": "link_15.0_tip", "index": "link_3.0_tip", "middle": "link_7.0_tip",
            "little": "link_11.0_tip"}
    write("allegro", h, annotation(m, po, tips))


def leap():
    po = Pose((-0.02, 0.03, 0.0), rot_x(PI / 2))
    h = Hand("leap_hand_right", po)
    h.root("palm_lower", [box(0.025, 0.1, 0.09, (0.0, 0.0, 0.04))])
    m = []
    r = 0.011
    twist = rot_x(-PI / 2)
    fingers = [(0, 5, (0.0, 0.038, 0.085)), (4, 9, (0.0, 0.0, 0.09)), (8, 18, (0.0, -0.038, 0.085))]
    for j0, s, base in fingers:
        # flexion comes first along the chain
        spec = [
            (str(j0 + 1), "mcp_joint_%d" % j0, Pose(), Y, s + 1, 1, (-0.314, 2.23), twist, 0.0),
            (str(j0), "pip_%d" % j0, Pose(), X, s, -1, (-1.047, 1.047), twist, 0.036),
            (str(j0 + 2), "dip_%d" % j0, Pose((0, 0, 0.036)), Y, s + 2, 1, (-0.506, 1.885), twist, 0.046),
            (str(j0 + 3), "fingertip_%d" % j0, Pose((0, 0, 0.046)), Y, s + 3, 1, (-0.366, 2.042), twist,
             0.048),
        ]
        build_chain(h, m, "palm_lower", Pose(base), spec, r, "tip_%d" % j0)
    th = Pose((0.02, 0.03, 0.02), rpy_to_mat(-1.3, 0.0, 0.0))
    spec = [
        ("12", "thumb_base", Pose(), Y, 0, 1, (-0.349, 2.094), twist, 0.0),
        ("13", "thumb_pip", Pose(), Z, 1, 1, (-0.47, 2.443), twist, 0.015),
        ("14", "thumb_dip", Pose((0, 0, 0.015)), Y, 3, 1, (-1.2, 1.9), twist, 0.05),
        ("15", "thumb_fingertip", Pose((0, 0, 0.05)), Y, 4, 1, (-1.34, 1.88), twist, 0.06),
    ]
    build_chain(h, m, "palm_lower", th, spec, r, "thumb_tip")
    tips = {"thumb": "thumb_tip", "index": "tip_0", "middle": "tip_4", "little": "tip_8"}
    write("leap", h, annotation(m, po, tips))


def barrett():
    po = Pose((0.0, 0.0, 0.0), rot_y(-PI / 2))
    h = Hand("barrett_hand", po)
    h.root("bh_base_link", [box(0.03, 0.09, 0.08, (0, 0, 0.04))])
    m = []
    r = 0.012
    fingers = [("1", 5, (0.0, 0.025, 0.08)), ("2", 9, (0.0, -0.025, 0.08))]
    for n, s, base in fingers:
        sign = 1 if n == "1" else -1
        spec = [
            ("bh_j%s1_joint" % n, "bh_finger_%s1_link" % n, Pose(), X, s, sign, (0.0, 3.1416), IDENT, 0.0),
            ("bh_j%s2_joint" % n, "bh_finger_%s2_link" % n, Pose((0, 0, 0.05)), Y, s + 1, 1, (0.0, 2.44),
             IDENT, 0.07),
            ("bh_j%s3_joint" % n, "bh_finger_%s3_link" % n, Pose((0, 0, 0.07)), Y, s + 2, 1, (0.0, 0.84),
             IDENT, 0.058),
        ]
        build_chain(h, m, "bh_base_link", Pose(base), spec, r, "bh_finger_%s_tip" % n)
    th = Pose((0.0, 0.0, 0.08), rot_z(PI))
    spec = [
        ("bh_j32_joint", "bh_finger_32_link", Pose((0, 0, 0.05)), Y, 3, 1, (0.0, 2.44), IDENT, 0.07),
        ("bh_j33_joint", "bh_finger_33_link", Pose((0, 0, 0.07)), Y, 4, 1, (0.0, 0.84), IDENT, 0.058),
    ]
    build_chain(h, m, "bh_base_link", th, spec, r, "bh_finger_3_tip")
    tips = {"thumb": "bh_finger_3_tip", "index": "bh_finger_1_tip", "middle": "bh_finger_2_tip"}
    write("barrett", h, annotation(m, po, tips))


def leap_extended():
    """Extended parameters of the full LEAP hand."""
    zero = [0.0] * 6
    origins = [zero[:] for _ in range(12)]
    axes = [[0.0, 1.0, 0.0] for _ in range(12)]
    # thumb ranks 1-3: abduction base, colocated rotation, flexion
    origins[0] = [0.02, 0.03, 0.02, -1.3, 0.0, 0.0]
    axes[0] = [0.0, 1.0, 0.0]
    axes[1] = [0.0, 0.0, 1.0]
    origins[2] = [0.0, 0.0, 0.015, 0.0, 0.0, 0.0]
    axes[2] = [0.0, 1.0, 0.0]
    # index, middle, ring r1/r2: flexion then colocated abduction
    bases = {1: (0.0, 0.038, 0.085), 2: (0.0, 0.0, 0.09), 3: (0.0, -0.019, 0.088)}
    for f, (x, y, z) in bases.items():
        i = 3 + 2 * (f - 1)
        origins[i] = [x, y, z, 0.0, 0.0, 0.0]
        axes[i] = [0.0, 1.0, 0.0]
        axes[i + 1] = [1.0, 0.0, 0.0]
    # little: no extra joint; r2 flexion at the knuckle, r3 abduction
    origins[10] = [0.0, -0.038, 0.085, 0.0, 0.0, 0.0]
    axes[10] = [0.0, 1.0, 0.0]
    axes[11] = [1.0, 0.0, 0.0]
    lowers = [0.0] * 22
    uppers = [0.0] * 22
    active = {
        0: (-0.349, 2.094), 1: (-0.47, 2.443), 2: (-1.2, 1.9), 3: (-1.34, 1.88),
        5: (-0.314, 2.23), 6: (-1.047, 1.047), 7: (-0.506, 1.885), 8: (-0.366, 2.042),
        9: (-0.314, 2.23), 10: (-1.047, 1.047), 11: (-0.506, 1.885), 12: (-0.366, 2.042),
        18: (-0.314, 2.23), 19: (-1.047, 1.047), 20: (-0.506, 1.885), 21: (-0.366, 2.042),
    }
    for s, (lo, hi) in active.items():
        lowers[s], uppers[s] = lo, hi
    params = {
        "palm_radius": 0.0475,
        "finger_radii": [0.011] * 5,
        # thumb: r4 at 0.05 past r3, tip 0.06 past r4, no third link
        "finger_lengths": [0.05, 0.06, 0.0, 0.036, 0.046, 0.048, 0.036, 0.046, 0.048,
                           0.036, 0.046, 0.048, 0.036, 0.046, 0.048],
        "joint_origins": [v for o in origins for v in o],
        "joint_axes": [v for a in axes for v in a],
        "joint_lowers": lowers,
        "joint_uppers": uppers,
        "handedness": "right",
    }
    dump(params, os.path.join(HERE, "leap_extended.json"))


def sample_params():
    lowers = [-0.3] * 22
    uppers = [1.2] * 22
    for s in (0, 1, 5, 9, 13, 18):
        lowers[s], uppers[s] = -0.35, 0.35
    p = {
        "palm_radius": 0.045,
        "finger_radius": 0.01,
        "finger_lengths": [0.038, 0.032, 0.027, 0.045, 0.025, 0.026],
        "finger_xyz": [0.029, 0.034, 0.029, 0.0, 0.033, 0.095, 0.0, 0.011, 0.099,
                       0.0, -0.011, 0.095, 0.0, -0.033, 0.086],
        "little_extra_origin": [0.0, -0.017, 0.02, -0.611, 0.0, 0.0],
        "thumb_rpy": [-1.0, 0.35, 0.0],
        "thumb_axes": [0.0, 1.0, 0.0, 1.0, 0.0, 0.0],
        "joint_lowers": lowers,
        "joint_uppers": uppers,
        "handedness": "right",
    }
    dump(p, os.path.join(HERE, "params.json"))
    p["joint_lowers"] = list(lowers)
    p["joint_lowers"][3], p["joint_uppers"][3] = 0.9, -0.2
    dump(p, os.path.join(HERE, "bad.json"))


if __name__ == "__main__":
    shadow()
    allegro()
    leap()
    barrett()
    leap_extended()
    sample_params()
