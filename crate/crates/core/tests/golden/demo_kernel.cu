// Element-parallel assembly of a P1 system with shared-memory local storage.
// blockDim = (N_QUAD, N_LOCAL * N_LOCAL, ELEMS_PER_BLOCK)

#define N_QUAD 3
#define N_LOCAL 3
#define ELEMS_PER_BLOCK 4
#define MAX_NZ 7
#define N_ENTRIES (N_LOCAL * N_LOCAL)
#define DET_EPS 1e-14

__constant__ double QUAD_XI[N_QUAD] = {0.16666666666666666, 0.6666666666666666, 0.16666666666666666};
__constant__ double QUAD_ETA[N_QUAD] = {0.16666666666666666, 0.16666666666666666, 0.6666666666666666};
__constant__ double QUAD_W[N_QUAD] = {0.16666666666666666, 0.16666666666666666, 0.16666666666666666};

__device__ double bilinear_0_0(const double* a) {
    const double r0 = 1.0;
    const double r1 = a[1];
    const double r2 = r0 - r1;
    const double r3 = a[0];
    const double r4 = r2 - r3;
    const double r5 = r4 * r4;
    const double r6 = a[6];
    const double r7 = a[2];
    const double r8 = r6 - r7;
    const double r9 = a[5];
    const double r10 = a[3];
    const double r11 = r9 - r10;
    const double r12 = r8 * r11;
    const double r13 = -r12;
    const double r14 = a[4];
    const double r15 = r14 - r7;
    const double r16 = a[7];
    const double r17 = r16 - r10;
    const double r18 = r15 * r17;
    const double r19 = r13 + r18;
    const double r20 = r8 - r15;
    const double r21 = r20 / r19;
    const double r22 = r11 - r17;
    const double r23 = r1 * r6;
    const double r24 = r1 * r16;
    const double r25 = r23 + r24;
    const double r26 = r7 * r4;
    const double r27 = r25 + r26;
    const double r28 = r14 * r3;
    const double r29 = r27 + r28;
    const double r30 = r3 * r9;
    const double r31 = r29 + r30;
    const double r32 = r10 * r4;
    const double r33 = r31 + r32;
    const double r34 = r22 * r33;
    const double r35 = r34 / r19;
    const double r36 = r21 + r35;
    const double r37 = r20 * r36;
    const double r38 = r37 / r19;
    const double r39 = r5 + r38;
    const double r40 = r23 + r26;
    const double r41 = r40 + r28;
    const double r42 = -r41;
    const double r43 = r24 + r30;
    const double r44 = r43 + r32;
    const double r45 = r42 - r44;
    const double r46 = r20 * r45;
    const double r47 = r46 / r19;
    const double r48 = r22 / r19;
    const double r49 = r47 + r48;
    const double r50 = r22 * r49;
    const double r51 = r50 / r19;
    const double r52 = r39 + r51;
    const double r53 = r19 * r19;
    const double r54 = sqrt(r53);
    const double r55 = r52 * r54;
    return r55;
}

__device__ double bilinear_0_1(const double* a) {
    const double r0 = 1.0;
    const double r1 = a[1];
    const double r2 = r0 - r1;
    const double r3 = a[0];
    const double r4 = r2 - r3;
    const double r5 = r3 * r4;
    const double r6 = a[6];
    const double r7 = a[2];
    const double r8 = r6 - r7;
    const double r9 = a[5];
    const double r10 = a[3];
    const double r11 = r9 - r10;
    const double r12 = r8 * r11;
    const double r13 = -r12;
    const double r14 = a[4];
    const double r15 = r14 - r7;
    const double r16 = a[7];
    const double r17 = r16 - r10;
    const double r18 = r15 * r17;
    const double r19 = r13 + r18;
    const double r20 = r8 - r15;
    const double r21 = r8 / r19;
    const double r22 = -r21;
    const double r23 = r1 * r6;
    const double r24 = r1 * r16;
    const double r25 = r23 + r24;
    const double r26 = r7 * r4;
    const double r27 = r25 + r26;
    const double r28 = r14 * r3;
    const double r29 = r27 + r28;
    const double r30 = r3 * r9;
    const double r31 = r29 + r30;
    const double r32 = r10 * r4;
    const double r33 = r31 + r32;
    const double r34 = r17 * r33;
    const double r35 = r34 / r19;
    const double r36 = r22 + r35;
    const double r37 = r20 * r36;
    const double r38 = r37 / r19;
    const double r39 = r5 + r38;
    const double r40 = r11 - r17;
    const double r41 = r23 + r26;
    const double r42 = r41 + r28;
    const double r43 = -r42;
    const double r44 = r24 + r30;
    const double r45 = r44 + r32;
    const double r46 = r43 - r45;
    const double r47 = r8 * r46;
    const double r48 = r47 / r19;
    const double r49 = -r48;
    const double r50 = r17 / r19;
    const double r51 = r49 + r50;
    const double r52 = r40 * r51;
    const double r53 = r52 / r19;
    const double r54 = r39 + r53;
    const double r55 = r19 * r19;
    const double r56 = sqrt(r55);
    const double r57 = r54 * r56;
    return r57;
}

__device__ double bilinear_0_2(const double* a) {
    const double r0 = 1.0;
    const double r1 = a[1];
    const double r2 = r0 - r1;
    const double r3 = a[0];
    const double r4 = r2 - r3;
    const double r5 = r1 * r4;
    const double r6 = a[6];
    const double r7 = a[2];
    const double r8 = r6 - r7;
    const double r9 = a[5];
    const double r10 = a[3];
    const double r11 = r9 - r10;
    const double r12 = r8 * r11;
    const double r13 = -r12;
    const double r14 = a[4];
    const double r15 = r14 - r7;
    const double r16 = a[7];
    const double r17 = r16 - r10;
    const double r18 = r15 * r17;
    const double r19 = r13 + r18;
    const double r20 = r8 - r15;
    const double r21 = r1 * r6;
    const double r22 = r1 * r16;
    const double r23 = r21 + r22;
    const double r24 = r7 * r4;
    const double r25 = r23 + r24;
    const double r26 = r14 * r3;
    const double r27 = r25 + r26;
    const double r28 = r3 * r9;
    const double r29 = r27 + r28;
    const double r30 = r10 * r4;
    const double r31 = r29 + r30;
    const double r32 = r11 * r31;
    const double r33 = r32 / r19;
    const double r34 = -r33;
    const double r35 = r15 / r19;
    const double r36 = r34 + r35;
    const double r37 = r20 * r36;
    const double r38 = r37 / r19;
    const double r39 = r5 + r38;
    const double r40 = r11 - r17;
    const double r41 = r11 / r19;
    const double r42 = -r41;
    const double r43 = r21 + r24;
    const double r44 = r43 + r26;
    const double r45 = -r44;
    const double r46 = r22 + r28;
    const double r47 = r46 + r30;
    const double r48 = r45 - r47;
    const double r49 = r15 * r48;
    const double r50 = r49 / r19;
    const double r51 = r42 + r50;
    const double r52 = r40 * r51;
    const double r53 = r52 / r19;
    const double r54 = r39 + r53;
    const double r55 = r19 * r19;
    const double r56 = sqrt(r55);
    const double r57 = r54 * r56;
    return r57;
}

__device__ double bilinear_1_0(const double* a) {
    const double r0 = a[6];
    const double r1 = a[2];
    const double r2 = r0 - r1;
    const double r3 = a[5];
    const double r4 = a[3];
    const double r5 = r3 - r4;
    const double r6 = r2 * r5;
    const double r7 = -r6;
    const double r8 = a[4];
    const double r9 = r8 - r1;
    const double r10 = a[7];
    const double r11 = r10 - r4;
    const double r12 = r9 * r11;
    const double r13 = r7 + r12;
    const double r14 = r2 - r9;
    const double r15 = r14 / r13;
    const double r16 = r5 - r11;
    const double r17 = a[1];
    const double r18 = r17 * r0;
    const double r19 = r17 * r10;
    const double r20 = r18 + r19;
    const double r21 = 1.0;
    const double r22 = r21 - r17;
    const double r23 = a[0];
    const double r24 = r22 - r23;
    const double r25 = r1 * r24;
    const double r26 = r20 + r25;
    const double r27 = r8 * r23;
    const double r28 = r26 + r27;
    const double r29 = r23 * r3;
    const double r30 = r28 + r29;
    const double r31 = r4 * r24;
    const double r32 = r30 + r31;
    const double r33 = r16 * r32;
    const double r34 = r33 / r13;
    const double r35 = r15 + r34;
    const double r36 = r2 * r35;
    const double r37 = r36 / r13;
    const double r38 = -r37;
    const double r39 = r23 * r24;
    const double r40 = r38 + r39;
    const double r41 = r18 + r25;
    const double r42 = r41 + r27;
    const double r43 = -r42;
    const double r44 = r19 + r29;
    const double r45 = r44 + r31;
    const double r46 = r43 - r45;
    const double r47 = r14 * r46;
    const double r48 = r47 / r13;
    const double r49 = r16 / r13;
    const double r50 = r48 + r49;
    const double r51 = r11 * r50;
    const double r52 = r51 / r13;
    const double r53 = r40 + r52;
    const double r54 = r13 * r13;
    const double r55 = sqrt(r54);
    const double r56 = r53 * r55;
    return r56;
}

__device__ double bilinear_1_1(const double* a) {
    const double r0 = a[0];
    const double r1 = r0 * r0;
    const double r2 = a[6];
    const double r3 = a[2];
    const double r4 = r2 - r3;
    const double r5 = a[5];
    const double r6 = a[3];
    const double r7 = r5 - r6;
    const double r8 = r4 * r7;
    const double r9 = -r8;
    const double r10 = a[4];
    const double r11 = r10 - r3;
    const double r12 = a[7];
    const double r13 = r12 - r6;
    const double r14 = r11 * r13;
    const double r15 = r9 + r14;
    const double r16 = r4 / r15;
    const double r17 = -r16;
    const double r18 = a[1];
    const double r19 = r18 * r2;
    const double r20 = r18 * r12;
    const double r21 = r19 + r20;
    const double r22 = 1.0;
    const double r23 = r22 - r18;
    const double r24 = r23 - r0;
    const double r25 = r3 * r24;
    const double r26 = r21 + r25;
    const double r27 = r10 * r0;
    const double r28 = r26 + r27;
    const double r29 = r0 * r5;
    const double r30 = r28 + r29;
    const double r31 = r6 * r24;
    const double r32 = r30 + r31;
    const double r33 = r13 * r32;
    const double r34 = r33 / r15;
    const double r35 = r17 + r34;
    const double r36 = r4 * r35;
    const double r37 = r36 / r15;
    const double r38 = r1 - r37;
    const double r39 = r19 + r25;
    const double r40 = r39 + r27;
    const double r41 = -r40;
    const double r42 = r20 + r29;
    const double r43 = r42 + r31;
    const double r44 = r41 - r43;
    const double r45 = r4 * r44;
    const double r46 = r45 / r15;
    const double r47 = -r46;
    const double r48 = r13 / r15;
    const double r49 = r47 + r48;
    const double r50 = r13 * r49;
    const double r51 = r50 / r15;
    const double r52 = r38 + r51;
    const double r53 = r15 * r15;
    const double r54 = sqrt(r53);
    const double r55 = r52 * r54;
    return r55;
}

__device__ double bilinear_1_2(const double* a) {
    const double r0 = a[6];
    const double r1 = a[2];
    const double r2 = r0 - r1;
    const double r3 = a[5];
    const double r4 = a[3];
    const double r5 = r3 - r4;
    const double r6 = r2 * r5;
    const double r7 = -r6;
    const double r8 = a[4];
    const double r9 = r8 - r1;
    const double r10 = a[7];
    const double r11 = r10 - r4;
    const double r12 = r9 * r11;
    const double r13 = r7 + r12;
    const double r14 = a[1];
    const double r15 = r14 * r0;
    const double r16 = r14 * r10;
    const double r17 = r15 + r16;
    const double r18 = 1.0;
    const double r19 = r18 - r14;
    const double r20 = a[0];
    const double r21 = r19 - r20;
    const double r22 = r1 * r21;
    const double r23 = r17 + r22;
    const double r24 = r8 * r20;
    const double r25 = r23 + r24;
    const double r26 = r20 * r3;
    const double r27 = r25 + r26;
    const double r28 = r4 * r21;
    const double r29 = r27 + r28;
    const double r30 = r5 * r29;
    const double r31 = r30 / r13;
    const double r32 = -r31;
    const double r33 = r9 / r13;
    const double r34 = r32 + r33;
    const double r35 = r2 * r34;
    const double r36 = r35 / r13;
    const double r37 = -r36;
    const double r38 = r14 * r20;
    const double r39 = r37 + r38;
    const double r40 = r5 / r13;
    const double r41 = -r40;
    const double r42 = r15 + r22;
    const double r43 = r42 + r24;
    const double r44 = -r43;
    const double r45 = r16 + r26;
    const double r46 = r45 + r28;
    const double r47 = r44 - r46;
    const double r48 = r9 * r47;
    const double r49 = r48 / r13;
    const double r50 = r41 + r49;
    const double r51 = r11 * r50;
    const double r52 = r51 / r13;
    const double r53 = r39 + r52;
    const double r54 = r13 * r13;
    const double r55 = sqrt(r54);
    const double r56 = r53 * r55;
    return r56;
}

__device__ double bilinear_2_0(const double* a) {
    const double r0 = a[6];
    const double r1 = a[2];
    const double r2 = r0 - r1;
    const double r3 = a[5];
    const double r4 = a[3];
    const double r5 = r3 - r4;
    const double r6 = r2 * r5;
    const double r7 = -r6;
    const double r8 = a[4];
    const double r9 = r8 - r1;
    const double r10 = a[7];
    const double r11 = r10 - r4;
    const double r12 = r9 * r11;
    const double r13 = r7 + r12;
    const double r14 = r2 - r9;
    const double r15 = a[1];
    const double r16 = r15 * r0;
    const double r17 = 1.0;
    const double r18 = r17 - r15;
    const double r19 = a[0];
    const double r20 = r18 - r19;
    const double r21 = r1 * r20;
    const double r22 = r16 + r21;
    const double r23 = r8 * r19;
    const double r24 = r22 + r23;
    const double r25 = -r24;
    const double r26 = r15 * r10;
    const double r27 = r19 * r3;
    const double r28 = r26 + r27;
    const double r29 = r4 * r20;
    const double r30 = r28 + r29;
    const double r31 = r25 - r30;
    const double r32 = r14 * r31;
    const double r33 = r32 / r13;
    const double r34 = r5 - r11;
    const double r35 = r34 / r13;
    const double r36 = r33 + r35;
    const double r37 = r5 * r36;
    const double r38 = r37 / r13;
    const double r39 = -r38;
    const double r40 = r15 * r20;
    const double r41 = r39 + r40;
    const double r42 = r14 / r13;
    const double r43 = r16 + r26;
    const double r44 = r43 + r21;
    const double r45 = r44 + r23;
    const double r46 = r45 + r27;
    const double r47 = r46 + r29;
    const double r48 = r34 * r47;
    const double r49 = r48 / r13;
    const double r50 = r42 + r49;
    const double r51 = r9 * r50;
    const double r52 = r51 / r13;
    const double r53 = r41 + r52;
    const double r54 = r13 * r13;
    const double r55 = sqrt(r54);
    const double r56 = r53 * r55;
    return r56;
}

__device__ double bilinear_2_1(const double* a) {
    const double r0 = a[6];
    const double r1 = a[2];
    const double r2 = r0 - r1;
    const double r3 = a[5];
    const double r4 = a[3];
    const double r5 = r3 - r4;
    const double r6 = r2 * r5;
    const double r7 = -r6;
    const double r8 = a[4];
    const double r9 = r8 - r1;
    const double r10 = a[7];
    const double r11 = r10 - r4;
    const double r12 = r9 * r11;
    const double r13 = r7 + r12;
    const double r14 = a[1];
    const double r15 = r14 * r0;
    const double r16 = 1.0;
    const double r17 = r16 - r14;
    const double r18 = a[0];
    const double r19 = r17 - r18;
    const double r20 = r1 * r19;
    const double r21 = r15 + r20;
    const double r22 = r8 * r18;
    const double r23 = r21 + r22;
    const double r24 = -r23;
    const double r25 = r14 * r10;
    const double r26 = r18 * r3;
    const double r27 = r25 + r26;
    const double r28 = r4 * r19;
    const double r29 = r27 + r28;
    const double r30 = r24 - r29;
    const double r31 = r2 * r30;
    const double r32 = r31 / r13;
    const double r33 = -r32;
    const double r34 = r11 / r13;
    const double r35 = r33 + r34;
    const double r36 = r5 * r35;
    const double r37 = r36 / r13;
    const double r38 = -r37;
    const double r39 = r14 * r18;
    const double r40 = r38 + r39;
    const double r41 = r2 / r13;
    const double r42 = -r41;
    const double r43 = r15 + r25;
    const double r44 = r43 + r20;
    const double r45 = r44 + r22;
    const double r46 = r45 + r26;
    const double r47 = r46 + r28;
    const double r48 = r11 * r47;
    const double r49 = r48 / r13;
    const double r50 = r42 + r49;
    const double r51 = r9 * r50;
    const double r52 = r51 / r13;
    const double r53 = r40 + r52;
    const double r54 = r13 * r13;
    const double r55 = sqrt(r54);
    const double r56 = r53 * r55;
    return r56;
}

__device__ double bilinear_2_2(const double* a) {
    const double r0 = a[1];
    const double r1 = r0 * r0;
    const double r2 = a[6];
    const double r3 = a[2];
    const double r4 = r2 - r3;
    const double r5 = a[5];
    const double r6 = a[3];
    const double r7 = r5 - r6;
    const double r8 = r4 * r7;
    const double r9 = -r8;
    const double r10 = a[4];
    const double r11 = r10 - r3;
    const double r12 = a[7];
    const double r13 = r12 - r6;
    const double r14 = r11 * r13;
    const double r15 = r9 + r14;
    const double r16 = r7 / r15;
    const double r17 = -r16;
    const double r18 = r0 * r2;
    const double r19 = 1.0;
    const double r20 = r19 - r0;
    const double r21 = a[0];
    const double r22 = r20 - r21;
    const double r23 = r3 * r22;
    const double r24 = r18 + r23;
    const double r25 = r10 * r21;
    const double r26 = r24 + r25;
    const double r27 = -r26;
    const double r28 = r0 * r12;
    const double r29 = r21 * r5;
    const double r30 = r28 + r29;
    const double r31 = r6 * r22;
    const double r32 = r30 + r31;
    const double r33 = r27 - r32;
    const double r34 = r11 * r33;
    const double r35 = r34 / r15;
    const double r36 = r17 + r35;
    const double r37 = r7 * r36;
    const double r38 = r37 / r15;
    const double r39 = r1 - r38;
    const double r40 = r18 + r28;
    const double r41 = r40 + r23;
    const double r42 = r41 + r25;
    const double r43 = r42 + r29;
    const double r44 = r43 + r31;
    const double r45 = r7 * r44;
    const double r46 = r45 / r15;
    const double r47 = -r46;
    const double r48 = r11 / r15;
    const double r49 = r47 + r48;
    const double r50 = r11 * r49;
    const double r51 = r50 / r15;
    const double r52 = r39 + r51;
    const double r53 = r15 * r15;
    const double r54 = sqrt(r53);
    const double r55 = r52 * r54;
    return r55;
}

__device__ double linear_0(const double* a) {
    const double r0 = 1.0;
    const double r1 = a[1];
    const double r2 = r0 - r1;
    const double r3 = a[0];
    const double r4 = r2 - r3;
    const double r5 = a[6];
    const double r6 = r1 * r5;
    const double r7 = a[2];
    const double r8 = r7 * r4;
    const double r9 = r6 + r8;
    const double r10 = a[4];
    const double r11 = r10 * r3;
    const double r12 = r9 + r11;
    const double r13 = r12 * r12;
    const double r14 = a[7];
    const double r15 = r1 * r14;
    const double r16 = a[5];
    const double r17 = r3 * r16;
    const double r18 = r15 + r17;
    const double r19 = a[3];
    const double r20 = r19 * r4;
    const double r21 = r18 + r20;
    const double r22 = r21 * r21;
    const double r23 = r13 + r22;
    const double r24 = r23 + r23;
    const double r25 = 36.0;
    const double r26 = r25 - r24;
    const double r27 = r4 * r26;
    const double r28 = r5 - r7;
    const double r29 = r16 - r19;
    const double r30 = r28 * r29;
    const double r31 = -r30;
    const double r32 = r10 - r7;
    const double r33 = r14 - r19;
    const double r34 = r32 * r33;
    const double r35 = r31 + r34;
    const double r36 = r35 * r35;
    const double r37 = sqrt(r36);
    const double r38 = r27 * r37;
    return r38;
}

__device__ double linear_1(const double* a) {
    const double r0 = a[1];
    const double r1 = a[6];
    const double r2 = r0 * r1;
    const double r3 = 1.0;
    const double r4 = r3 - r0;
    const double r5 = a[0];
    const double r6 = r4 - r5;
    const double r7 = a[2];
    const double r8 = r7 * r6;
    const double r9 = r2 + r8;
    const double r10 = a[4];
    const double r11 = r10 * r5;
    const double r12 = r9 + r11;
    const double r13 = r12 * r12;
    const double r14 = a[7];
    const double r15 = r0 * r14;
    const double r16 = a[5];
    const double r17 = r5 * r16;
    const double r18 = r15 + r17;
    const double r19 = a[3];
    const double r20 = r19 * r6;
    const double r21 = r18 + r20;
    const double r22 = r21 * r21;
    const double r23 = r13 + r22;
    const double r24 = r23 + r23;
    const double r25 = 36.0;
    const double r26 = r25 - r24;
    const double r27 = r5 * r26;
    const double r28 = r1 - r7;
    const double r29 = r16 - r19;
    const double r30 = r28 * r29;
    const double r31 = -r30;
    const double r32 = r10 - r7;
    const double r33 = r14 - r19;
    const double r34 = r32 * r33;
    const double r35 = r31 + r34;
    const double r36 = r35 * r35;
    const double r37 = sqrt(r36);
    const double r38 = r27 * r37;
    return r38;
}

__device__ double linear_2(const double* a) {
    const double r0 = a[1];
    const double r1 = a[6];
    const double r2 = r0 * r1;
    const double r3 = 1.0;
    const double r4 = r3 - r0;
    const double r5 = a[0];
    const double r6 = r4 - r5;
    const double r7 = a[2];
    const double r8 = r7 * r6;
    const double r9 = r2 + r8;
    const double r10 = a[4];
    const double r11 = r10 * r5;
    const double r12 = r9 + r11;
    const double r13 = r12 * r12;
    const double r14 = a[7];
    const double r15 = r0 * r14;
    const double r16 = a[5];
    const double r17 = r5 * r16;
    const double r18 = r15 + r17;
    const double r19 = a[3];
    const double r20 = r19 * r6;
    const double r21 = r18 + r20;
    const double r22 = r21 * r21;
    const double r23 = r13 + r22;
    const double r24 = r23 + r23;
    const double r25 = 36.0;
    const double r26 = r25 - r24;
    const double r27 = r0 * r26;
    const double r28 = r1 - r7;
    const double r29 = r16 - r19;
    const double r30 = r28 * r29;
    const double r31 = -r30;
    const double r32 = r10 - r7;
    const double r33 = r14 - r19;
    const double r34 = r32 * r33;
    const double r35 = r31 + r34;
    const double r36 = r35 * r35;
    const double r37 = sqrt(r36);
    const double r38 = r27 * r37;
    return r38;
}

__device__ double bilinear_entry(int k, const double* a) {
    switch (k) {
    case 0: return bilinear_0_0(a);
    case 1: return bilinear_0_1(a);
    case 2: return bilinear_0_2(a);
    case 3: return bilinear_1_0(a);
    case 4: return bilinear_1_1(a);
    case 5: return bilinear_1_2(a);
    case 6: return bilinear_2_0(a);
    case 7: return bilinear_2_1(a);
    case 8: return bilinear_2_2(a);
    default: return 0.0;
    }
}

__device__ double linear_entry(int k, const double* a) {
    switch (k) {
    case 0: return linear_0(a);
    case 1: return linear_1(a);
    case 2: return linear_2(a);
    default: return 0.0;
    }
}

__device__ bool load_element(const double* X, const double* Y, const int* gIdx, int n_elem,
                             double sX[][N_LOCAL], double sY[][N_LOCAL], int sIdx[][N_LOCAL],
                             double sA[][N_ENTRIES], double sB[][N_LOCAL]) {
    const int z = threadIdx.z;
    const int e = blockIdx.x * ELEMS_PER_BLOCK + z;
    const bool live = e < n_elem;
    if (threadIdx.x == 0 && threadIdx.y < N_LOCAL && live) {
        const int k = threadIdx.y;
        sX[z][k] = X[N_LOCAL * e + k];
        sY[z][k] = Y[N_LOCAL * e + k];
        sIdx[z][k] = gIdx[N_LOCAL * e + k];
    }
    if (threadIdx.x == 0) {
        sA[z][threadIdx.y] = 0.0;
        if (threadIdx.y < N_LOCAL) sB[z][threadIdx.y] = 0.0;
    }
    __syncthreads();
    return live;
}

__device__ void integrate(double sX[][N_LOCAL], double sY[][N_LOCAL],
                          double sA[][N_ENTRIES], double sB[][N_LOCAL], int* status) {
    const int z = threadIdx.z;
    const int q = threadIdx.x;
    const int entry = threadIdx.y;
    double a[8];
    a[0] = QUAD_XI[q];
    a[1] = QUAD_ETA[q];
    for (int k = 0; k < N_LOCAL; ++k) {
        a[2 + 2 * k] = sX[z][k];
        a[3 + 2 * k] = sY[z][k];
    }
    const double det = (a[4] - a[2]) * (a[7] - a[3]) - (a[6] - a[2]) * (a[5] - a[3]);
    if (fabs(det) <= DET_EPS) {
        atomicExch(status, blockIdx.x * ELEMS_PER_BLOCK + z + 1);
        return;
    }
    atomicAdd(&sA[z][entry], QUAD_W[q] * bilinear_entry(entry, a));
    if (entry < N_LOCAL) {
        atomicAdd(&sB[z][entry], QUAD_W[q] * linear_entry(entry, a));
    }
}

extern "C" __global__ void assemble_dense(const double* X, const double* Y, const int* gIdx,
                                          int n_elem, int n_nodes, double* A, double* b,
                                          int* status) {
    __shared__ double sX[ELEMS_PER_BLOCK][N_LOCAL];
    __shared__ double sY[ELEMS_PER_BLOCK][N_LOCAL];
    __shared__ int sIdx[ELEMS_PER_BLOCK][N_LOCAL];
    __shared__ double sA[ELEMS_PER_BLOCK][N_ENTRIES];
    __shared__ double sB[ELEMS_PER_BLOCK][N_LOCAL];

    const bool live = load_element(X, Y, gIdx, n_elem, sX, sY, sIdx, sA, sB);
    if (live) integrate(sX, sY, sA, sB, status);
    __syncthreads();
    if (!live || threadIdx.x != 0) return;

    const int z = threadIdx.z;
    const int i = threadIdx.y / N_LOCAL;
    const int j = threadIdx.y % N_LOCAL;
    atomicAdd(&A[(size_t)sIdx[z][i] * n_nodes + sIdx[z][j]], sA[z][threadIdx.y]);
    if (threadIdx.y < N_LOCAL) {
        atomicAdd(&b[sIdx[z][threadIdx.y]], sB[z][threadIdx.y]);
    }
}

__device__ int find_slot(const int* row, int len, int col) {
    int lo = 0, hi = len;
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (row[mid] < col) lo = mid + 1; else hi = mid;
    }
    return (lo < len && row[lo] == col) ? lo : -1;
}

extern "C" __global__ void assemble_ell(const double* X, const double* Y, const int* gIdx,
                                        int n_elem, const int* gNbrNodeLen,
                                        const int* gNbrNodeIdx, double* A, double* b,
                                        int* status) {
    __shared__ double sX[ELEMS_PER_BLOCK][N_LOCAL];
    __shared__ double sY[ELEMS_PER_BLOCK][N_LOCAL];
    __shared__ int sIdx[ELEMS_PER_BLOCK][N_LOCAL];
    __shared__ double sA[ELEMS_PER_BLOCK][N_ENTRIES];
    __shared__ double sB[ELEMS_PER_BLOCK][N_LOCAL];

    const bool live = load_element(X, Y, gIdx, n_elem, sX, sY, sIdx, sA, sB);
    if (live) integrate(sX, sY, sA, sB, status);
    __syncthreads();
    if (!live || threadIdx.x != 0) return;

    const int z = threadIdx.z;
    const int row = sIdx[z][threadIdx.y / N_LOCAL];
    const int col = sIdx[z][threadIdx.y % N_LOCAL];
    const int slot = find_slot(&gNbrNodeIdx[(size_t)row * MAX_NZ], gNbrNodeLen[row], col);
    if (slot < 0) {
        atomicExch(status, -1);
        return;
    }
    atomicAdd(&A[(size_t)row * MAX_NZ + slot], sA[z][threadIdx.y]);
    if (threadIdx.y < N_LOCAL) {
        atomicAdd(&b[sIdx[z][threadIdx.y]], sB[z][threadIdx.y]);
    }
}
