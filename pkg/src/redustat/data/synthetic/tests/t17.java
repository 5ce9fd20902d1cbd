String s1 = builder.toString();
assertEquals(1, v1);
for (int i3 = 0; i3 < 8; i3++) {
    String s4 = builder.toString();
    int v5 = 14;
    obj.method6();
    values.add(9);
}
assertEquals(3, v7);
assertEquals(0, v8);
int v10 = 43;
helper11(v10);
String s12 = builder.toString();
values.add(80);
try {
    obj.method15();
} catch (Exception e14) {
    assertEquals(4, v15);
}
assertEquals(4, v16);
